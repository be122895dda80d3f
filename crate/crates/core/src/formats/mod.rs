//! Circuit serialization and reports: the line-oriented text format (with
//! parser), ASCII-art diagrams and gate-count reports.

mod ascii;
mod counts;
mod text;

pub use ascii::{render_ascii, AsciiOptions};
pub use counts::render_counts;
pub use text::{parse, serialize, ParseError};
