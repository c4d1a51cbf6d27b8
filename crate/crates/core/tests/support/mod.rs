pub mod f_oracle;
pub mod folds;
pub mod measure_oracle;
pub mod oracle;
pub mod pct_oracle;
