//! Reductions between VAS reachability and the exchange-product problem, in
//! both directions.

mod hist_to_vas;
mod vas_to_data;

pub use hist_to_vas::{
    column_alphabet, instance_to_vas, multihistogram_over_alphabet, simulate_word, HistVas, WordTrace,
};
pub use vas_to_data::{
    enumerate_realizations, normalize_final, vas_to_instance, witness_to_data_run, witness_to_run, DataRealization,
    VasInstance, DEFAULT_REALIZATION_CAP,
};
