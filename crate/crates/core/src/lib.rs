//! Discrete Gauss and mean curvature on triangulated polyhedral surfaces and
//! polygonal space curves, checks of the integral curvature relations they
//! satisfy, discrete connections and holonomy, and area-driven variational
//! solvers.
//!
//! Sign conventions: closed meshes carry outward unit normals, so the vertex
//! mean-curvature vector `H_p` of a convex surface points inward and
//! `grad_p Area = -H_p`.

pub mod curvature;
pub mod error;
pub mod curve;
pub mod geom;
pub mod holonomy;
pub mod mesh;
pub mod relations;
pub mod shapes;
pub mod steiner;
pub mod variational;

pub use error::{Error, Result};
pub use geom::Vec3;
pub use mesh::{MeshTopology, TriMesh, VertexStar};
