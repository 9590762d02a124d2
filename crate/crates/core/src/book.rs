//! The guide's chapters and the README, compiled as doctests so their code
//! blocks stay in sync with the crate (`cargo test --doc`).

#[doc = include_str!("../../../book/src/introduction.md")]
pub struct GuideIntroduction;

#[doc = include_str!("../../../book/src/boolean-cube.md")]
pub struct GuideBooleanCube;

#[doc = include_str!("../../../book/src/fourier.md")]
pub struct GuideFourier;

#[doc = include_str!("../../../book/src/regression.md")]
pub struct GuideRegression;

#[doc = include_str!("../../../book/src/learners.md")]
pub struct GuideLearners;

#[doc = include_str!("../../../book/src/evaluation.md")]
pub struct GuideEvaluation;

#[doc = include_str!("../../../book/src/cli.md")]
pub struct GuideCli;

#[doc = include_str!("../../../README.md")]
pub struct Readme;
