#![allow(dead_code)]

pub mod dict_gen;
pub mod inject;
pub mod lexc_gen;
