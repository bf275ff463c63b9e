use num_bigint::BigInt;

/// Per-degree integral homology data: Betti number plus sorted torsion
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSignature {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl DegreeSignature {
    pub fn free(betti: usize) -> DegreeSignature {
        DegreeSignature {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Truncated homology signature with its exactness horizon: values at
/// degrees `0 ..= exact_through` are exact, nothing is claimed beyond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologySignature {
    pub degrees: Vec<DegreeSignature>,
    pub exact_through: usize,
}

impl HomologySignature {
    pub fn new(degrees: Vec<DegreeSignature>, exact_through: usize) -> HomologySignature {
        debug_assert!(degrees.len() > exact_through);
        HomologySignature {
            degrees,
            exact_through,
        }
    }

    /// The signature of the empty space through the given horizon.
    pub fn empty(exact_through: usize) -> HomologySignature {
        HomologySignature {
            degrees: (0..=exact_through).map(|_| DegreeSignature::free(0)).collect(),
            exact_through,
        }
    }

    /// The signature of a point through the given horizon.
    pub fn point(exact_through: usize) -> HomologySignature {
        let mut degrees = vec![DegreeSignature::free(1)];
        degrees.extend((1..=exact_through).map(|_| DegreeSignature::free(0)));
        HomologySignature {
            degrees,
            exact_through,
        }
    }

    pub fn degree(&self, d: usize) -> &DegreeSignature {
        &self.degrees[d]
    }

    /// Disjoint-union sum, truncated to the common horizon.
    pub fn direct_sum(&self, other: &HomologySignature) -> HomologySignature {
        let horizon = self.exact_through.min(other.exact_through);
        let degrees = (0..=horizon)
            .map(|d| {
                let mut torsion = self.degrees[d].torsion.clone();
                torsion.extend(other.degrees[d].torsion.iter().cloned());
                torsion.sort();
                DegreeSignature {
                    betti: self.degrees[d].betti + other.degrees[d].betti,
                    torsion,
                }
            })
            .collect();
        HomologySignature {
            degrees,
            exact_through: horizon,
        }
    }

    /// `Z^b + Z/t1 + Z/t2 ...` rendering per degree.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (d, sig) in self.degrees.iter().enumerate() {
            let mut terms: Vec<String> = Vec::new();
            match sig.betti {
                0 => {}
                1 => terms.push("Z".to_string()),
                b => terms.push(format!("Z^{b}")),
            }
            for t in &sig.torsion {
                terms.push(format!("Z/{t}"));
            }
            if terms.is_empty() {
                terms.push("0".to_string());
            }
            parts.push(format!("H{d}={}", terms.join("+")));
        }
        parts.join(", ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_sum_adds_betti_and_merges_torsion() {
        let a = HomologySignature::new(
            vec![
                DegreeSignature::free(1),
                DegreeSignature {
                    betti: 0,
                    torsion: vec![BigInt::from(2)],
                },
            ],
            1,
        );
        let b = HomologySignature::point(1);
        let s = a.direct_sum(&b);
        assert_eq!(s.degree(0).betti, 2);
        assert_eq!(s.degree(1).torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn describe_is_readable() {
        let s = HomologySignature::new(
            vec![
                DegreeSignature::free(1),
                DegreeSignature {
                    betti: 0,
                    torsion: vec![BigInt::from(2)],
                },
                DegreeSignature::free(0),
            ],
            2,
        );
        assert_eq!(s.describe(), "H0=Z, H1=Z/2, H2=0");
    }
}
