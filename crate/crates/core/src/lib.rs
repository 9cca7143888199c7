//! Central triangulations under parallel edge flips.
//!
//! Given `m` triangulations of one planar point set, find a center
//! triangulation and, for every input, a shortest sequence of parallel
//! flips reaching it, minimizing the total number of rounds. Small
//! instances are solved exactly through SAT encodings; larger ones with
//! crossing-reduction flip heuristics.

pub mod bounds;
pub mod encoding;
pub mod geometry;
pub mod heuristics;
pub mod instance;
pub mod pipeline;
pub mod satbackend;
pub mod triangulation;

pub use geometry::{Point, PointSet, QuadCatalog};
pub use instance::{Instance, InstanceError, Solution};
pub use triangulation::{Edge, FlipSequence, ParallelFlip, Triangulation};
