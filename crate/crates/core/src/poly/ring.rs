use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// Variable layout of the bigraded ring `k[t_0..t_n] ⊗ k[x_0,y_0,..,x_n,y_n]`.
///
/// Variables are indexed in declared order: the `t` block first, then the
/// pairs interleaved as `x_0, y_0, x_1, y_1, ...`. Graded-lex comparisons use
/// this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    t_vars: Vec<String>,
    pairs: Vec<(String, String)>,
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingSpec {
    pub fn new(t_vars: Vec<String>, pairs: Vec<(String, String)>) -> Result<Arc<Self>, PolyError> {
        if t_vars.is_empty() {
            return Err(PolyError::InvalidRing("at least one t-variable is required".into()));
        }
        if pairs.len() != t_vars.len() {
            return Err(PolyError::InvalidRing(format!(
                "{} t-variables need {} pairs, got {}",
                t_vars.len(),
                t_vars.len(),
                pairs.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for name in t_vars.iter().chain(pairs.iter().flat_map(|(x, y)| [x, y])) {
            if !is_identifier(name) {
                return Err(PolyError::InvalidRing(format!("invalid variable name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(PolyError::InvalidRing(format!("duplicate variable name {name:?}")));
            }
        }
        Ok(Arc::new(Self { t_vars, pairs }))
    }

    /// Ring with the given t-variables and pairs named `x0,y0,x1,y1,...`.
    pub fn with_default_pairs(t_vars: &[&str]) -> Result<Arc<Self>, PolyError> {
        let pairs = (0..t_vars.len())
            .map(|i| (format!("x{i}"), format!("y{i}")))
            .collect();
        Self::new(t_vars.iter().map(|s| s.to_string()).collect(), pairs)
    }

    /// Projective dimension `n` of the source space.
    pub fn n(&self) -> usize {
        self.t_vars.len() - 1
    }

    pub fn t_count(&self) -> usize {
        self.t_vars.len()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn nvars(&self) -> usize {
        self.t_vars.len() + 2 * self.pairs.len()
    }

    pub fn t_vars(&self) -> &[String] {
        &self.t_vars
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn x_index(&self, pair: usize) -> usize {
        self.t_vars.len() + 2 * pair
    }

    pub fn y_index(&self, pair: usize) -> usize {
        self.t_vars.len() + 2 * pair + 1
    }

    /// Pair index owning variable `var`, if it is a pair variable.
    pub fn pair_of(&self, var: usize) -> Option<usize> {
        var.checked_sub(self.t_vars.len())
            .map(|k| k / 2)
            .filter(|&p| p < self.pairs.len())
    }

    pub fn is_t_var(&self, var: usize) -> bool {
        var < self.t_vars.len()
    }

    pub fn var_name(&self, var: usize) -> &str {
        let t = self.t_vars.len();
        if var < t {
            &self.t_vars[var]
        } else {
            let (x, y) = &self.pairs[(var - t) / 2];
            if (var - t).is_multiple_of(2) {
                x
            } else {
                y
            }
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        (0..self.nvars()).find(|&v| self.var_name(v) == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_interleaves_pairs() {
        let r = RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap();
        assert_eq!(r.nvars(), 9);
        assert_eq!(r.var_name(3), "x0");
        assert_eq!(r.var_name(4), "y0");
        assert_eq!(r.var_name(8), "y2");
        assert_eq!(r.pair_of(7), Some(2));
        assert_eq!(r.pair_of(1), None);
        assert_eq!(r.var_index("y1"), Some(6));
    }

    #[test]
    fn rejects_duplicates_and_shape_mismatch() {
        assert!(RingSpec::new(vec!["u".into()], vec![("u".into(), "y".into())]).is_err());
        assert!(RingSpec::new(vec!["u".into(), "v".into()], vec![("x".into(), "y".into())]).is_err());
        assert!(RingSpec::new(vec!["1u".into()], vec![("x".into(), "y".into())]).is_err());
    }
}
