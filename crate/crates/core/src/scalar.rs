use std::fmt;

/// An element of the two-element tropical semiring `{0, -1}`.
///
/// `NegOne < Zero`, so the derived order is the semiring order and
/// `oplus` is the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    NegOne,
    Zero,
}

impl Scalar {
    pub const ALL: [Scalar; 2] = [Scalar::NegOne, Scalar::Zero];

    /// Tropical sum: the maximum. `NegOne` is neutral.
    pub fn oplus(self, other: Scalar) -> Scalar {
        self.max(other)
    }

    /// Tropical product: zero only when both factors are zero.
    pub fn odot(self, other: Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Zero, Scalar::Zero) => Scalar::Zero,
            _ => Scalar::NegOne,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Scalar::Zero
    }

    pub fn value(self) -> i8 {
        match self {
            Scalar::Zero => 0,
            Scalar::NegOne => -1,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Scalar::Zero => '0',
            Scalar::NegOne => '-',
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}
