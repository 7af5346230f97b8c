//! Simulation and verification of two-client verifiable blind quantum
//! computation on a linear (Qline) network.
//!
//! An untrusted source emits a two-qubit graph state, two clients mask each
//! qubit with secret `Rz(theta) X^b` rotations, a trusted third party turns
//! the clients' secrets and algorithm into blind measurement angles, and an
//! untrusted server measures. Interleaved test rounds measure the `Y (x) Y`
//! stabilizer, and the run is accepted only if few of them fail.

pub mod angle;
pub mod blindness;
pub mod devices;
pub mod error;
pub mod protocol;
pub mod qmath;
pub mod rng;
pub mod verify;

pub use angle::{angle_add, angle_add_pi, angle_neg, Angle8};
pub use blindness::{
    averaged_second_qubit, averaged_two_qubit, blindness_report, holevo_protocol_ensemble, BlindnessOptions,
    BlindnessReport, Conditioning,
};
pub use devices::{noisy_source_state, DeviceErrors, NoiseParams, PcOffsetMode, ServerBehavior};
pub use error::{Error, Result};
pub use protocol::{
    run_protocol, run_round, Algorithm, ClientSecrets, ProtocolConfig, ProtocolVariant, RoundRecord, RoundType,
    SecondMeasurement, Transcript,
};
pub use qmath::{Complex, DensityMatrix1Q, DensityMatrix2Q, PureState2Q, Qubit, Unitary2, Unitary4};
pub use verify::{decide, majority_vote, sigma_threshold, test_error_fraction, RunStats, Thresholds, Verdict};
