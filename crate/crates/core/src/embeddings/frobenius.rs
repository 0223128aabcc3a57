//! `M_p ⊕ M_q → M_k`, `(x, y) ↦ diag(x, …, x, y, …, y)` for `k = a p + b q`.

use num_traits::One;

use super::{exact_certificate, EmbeddingCertificate, SourceAlgebra, TargetAlgebra};
use crate::error::{Error, Result};
use crate::partitions::FrobeniusWitness;
use crate::{ExactMatrix, Rational};

/// Largest `k` accepted; images are `k × k`.
pub const MAX_SUM_DIM: u64 = 4096;

pub fn embed_sum_into_matrix(p: u64, q: u64, k: u64, witness: &FrobeniusWitness) -> Result<EmbeddingCertificate> {
    if (witness.p, witness.q, witness.k) != (p, q, k) {
        return Err(Error::InvalidWitness(format!(
            "witness is for (p,q,k) = ({},{},{}), not ({p},{q},{k})",
            witness.p, witness.q, witness.k
        )));
    }
    witness.validate()?;
    if k > MAX_SUM_DIM {
        return Err(Error::LimitExceeded {
            what: "k",
            value: k as u128,
            max: MAX_SUM_DIM as u128,
        });
    }
    let (a, b) = (witness.a.unwrap() as usize, witness.b.unwrap() as usize);
    let (p, q, k) = (p as usize, q as usize, k as usize);
    let source = SourceAlgebra::sum(p, q);
    let images = source
        .units()
        .into_iter()
        .map(|u| {
            let (size, copies, start) = if u.summand == 0 { (p, a, 0) } else { (q, b, a * p) };
            ExactMatrix::from_entries(
                k,
                (0..copies).map(|t| {
                    let base = start + t * size;
                    (base + u.row, base + u.col, Rational::one())
                }),
            )
        })
        .collect();
    Ok(exact_certificate(source, TargetAlgebra::FullMatrix { k }, images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::MatrixUnit;
    use crate::partitions::represent_as_ap_bq;

    #[test]
    fn three_five_eight_is_diag_x_y() {
        let w = represent_as_ap_bq(3, 5, 8).unwrap();
        let cert = embed_sum_into_matrix(3, 5, 8, &w).unwrap();
        assert!(cert.is_valid());
        assert!(cert.exact_zero.all());
        let img = cert.image(MatrixUnit {
            summand: 1,
            row: 0,
            col: 4,
        });
        assert_eq!(img.iter().map(|(r, c, _)| (r, c)).collect::<Vec<_>>(), vec![(3, 7)]);
    }

    #[test]
    fn two_three_seven_repeats_x_twice() {
        let w = represent_as_ap_bq(2, 3, 7).unwrap();
        assert_eq!((w.a, w.b), (Some(2), Some(1)));
        let cert = embed_sum_into_matrix(2, 3, 7, &w).unwrap();
        assert!(cert.exact_zero.all());
        let img = cert.image(MatrixUnit {
            summand: 0,
            row: 1,
            col: 0,
        });
        assert_eq!(
            img.iter().map(|(r, c, _)| (r, c)).collect::<Vec<_>>(),
            vec![(1, 0), (3, 2)]
        );
    }

    #[test]
    fn rejects_bad_witness() {
        let mut w = represent_as_ap_bq(3, 5, 8).unwrap();
        w.a = Some(2);
        assert!(matches!(
            embed_sum_into_matrix(3, 5, 8, &w),
            Err(Error::InvalidWitness(_))
        ));
        let none = represent_as_ap_bq(3, 5, 7).unwrap();
        assert!(embed_sum_into_matrix(3, 5, 7, &none).is_err());
        let other = represent_as_ap_bq(3, 5, 8).unwrap();
        assert!(embed_sum_into_matrix(3, 5, 11, &other).is_err());
    }
}
