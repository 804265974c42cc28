pub mod classify_oracles;
pub mod fixture;
pub mod harness_props;
pub mod seneca_oracle;
