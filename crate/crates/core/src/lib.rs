//! Error channels as input-preserving transducers, and the block-code
//! questions they answer: is a code error-detecting or error-correcting for a
//! channel, how close is it to maximal, and how to grow one at random.
//!
//! ```
//! use chancode::{Alphabet, Channel, Trellis, properties};
//!
//! let bin = Alphabet::binary();
//! let sub1 = Channel::from_name("sub:1", &bin).unwrap();
//! let code = Trellis::from_strs(&bin, &["000", "111"]).unwrap();
//! assert!(properties::is_correcting(&code, &sub1).unwrap());
//! ```

pub mod alphabet;
pub mod automata;
pub mod channels;
pub mod codegen;
pub mod error;
pub mod format;
pub mod properties;
pub mod transducer;

pub use alphabet::{Alphabet, Symbol, Word};
pub use automata::{Dfa, Nfa, Trellis};
pub use channels::Channel;
pub use codegen::{make_code, next_word, GenParams, GenReport, NextWord};
pub use error::{Error, Result};
pub use properties::Witness;
pub use transducer::{compose, product, Transducer};

pub use num_rational::Ratio;
