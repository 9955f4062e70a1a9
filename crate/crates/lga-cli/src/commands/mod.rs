pub mod apply;
pub mod bench;
pub mod compile;
pub mod oracle_check;
pub mod scan;
pub mod stats;
pub mod text;
