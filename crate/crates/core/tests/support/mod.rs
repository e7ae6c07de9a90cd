#![allow(dead_code)]

pub mod nlg_cases;
pub mod random_sql;
