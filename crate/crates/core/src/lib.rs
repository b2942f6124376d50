//! Makespan scheduling of coflows on `m` parallel `N x N` non-blocking
//! switch cores.
//!
//! * [`model`]: flows, coflows, networks, assignments and their ledgers.
//! * [`lowerbound`]: port and flow lower bounds on the optimal makespan.
//! * [`schedulers`]: flow- and coflow-level list scheduling plus a baseline.
//! * [`realizer`]: explicit time-sliced schedules via matching decomposition.
//! * [`oracle`]: exhaustive optimum for tiny instances.
//! * [`workload`]: synthetic generators, trace reader, instance text format.
//! * [`harness`]: seeded experiment sweeps and CSV output.
//!
//! ```
//! use coflow_core::model::{predicted_makespan, Coflow, Instance, NetworkSpec, Time};
//! use coflow_core::schedulers::SchedulerKind;
//!
//! let coflows = vec![
//!     Coflow::new(1, [(0, 0, 5)]).unwrap(),
//!     Coflow::new(2, [(0, 0, 5)]).unwrap(),
//! ];
//! let instance = Instance::new(NetworkSpec::identical(2, 1).unwrap(), coflows).unwrap();
//! let assignment = SchedulerKind::Flpt.schedule(&instance).unwrap();
//! let result = predicted_makespan(&assignment, &instance).unwrap();
//! assert_eq!(result.overall, Time::from_integer(5));
//! ```

pub mod error;
pub mod harness;
pub mod lowerbound;
pub mod model;
pub mod oracle;
pub mod realizer;
pub mod schedulers;
pub mod workload;

pub use error::{Error, Result};
