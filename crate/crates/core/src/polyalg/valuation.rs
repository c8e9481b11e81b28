use crate::scalar::Scalar;

/// Assignment of a value to every parameter slot `0..len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation<C> {
    values: Vec<C>,
}

impl<C> Valuation<C> {
    pub fn new(values: Vec<C>) -> Self {
        Valuation { values }
    }

    pub fn get(&self, var: usize) -> Option<&C> {
        self.values.get(var)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C> {
        self.values
    }
}

impl<C: Scalar> Valuation<C> {
    pub fn map<D>(&self, f: impl Fn(&C) -> D) -> Valuation<D> {
        Valuation {
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl<C> From<Vec<C>> for Valuation<C> {
    fn from(values: Vec<C>) -> Self {
        Valuation { values }
    }
}
