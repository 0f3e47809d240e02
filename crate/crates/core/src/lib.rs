pub mod asymptotics;
pub mod catalog;
pub mod cross;
pub mod error;
pub mod fewones;
pub mod joint;
pub mod moments;
pub mod oracle;
pub mod precision;
pub mod series;
pub mod stats;
pub mod verify;
