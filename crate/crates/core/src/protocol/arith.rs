//! Arithmetic modulo `d` and the three-way sign of a masked difference.

use super::ProtocolError;

fn check(value: usize, d: usize) -> Result<(), ProtocolError> {
    if value >= d {
        return Err(ProtocolError::ValueOutOfRange { what: "residue", value, max: d.saturating_sub(1) });
    }
    Ok(())
}

/// `(a + b) mod d` for residues `a, b` in `0..d`.
pub fn mod_add(a: usize, b: usize, d: usize) -> Result<usize, ProtocolError> {
    check(a, d)?;
    check(b, d)?;
    Ok((a + b) % d)
}

/// `(a − b) mod d` for residues `a, b` in `0..d`.
pub fn mod_sub(a: usize, b: usize, d: usize) -> Result<usize, ProtocolError> {
    check(a, d)?;
    check(b, d)?;
    Ok((a + d - b) % d)
}

/// 1 for `x` in `1..=l`, 0 for `x = 0`, −1 for `x` in `l+1..=2l`.
pub fn sign_function(x: usize, l: usize) -> Result<i8, ProtocolError> {
    match x {
        0 => Ok(0),
        x if x <= l => Ok(1),
        x if x <= 2 * l => Ok(-1),
        x => Err(ProtocolError::ValueOutOfRange { what: "signed difference", value: x, max: 2 * l }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(mod_add(6, 4, 9).unwrap(), 1);
        assert_eq!(mod_sub(0, 1, 9).unwrap(), 8);
        assert_eq!(mod_sub(3, 4, 9).unwrap(), 8);
        assert_eq!(sign_function(0, 4).unwrap(), 0);
        assert_eq!(sign_function(8, 4).unwrap(), -1);
        assert_eq!(sign_function(2, 4).unwrap(), 1);
    }

    #[test]
    fn out_of_range() {
        assert!(mod_add(9, 0, 9).is_err());
        assert!(mod_sub(0, 9, 9).is_err());
        assert!(sign_function(9, 4).is_err());
    }

    /// Every ordered pair of plaintexts in `0..=l` lands in the right sign
    /// class once reduced mod `2l + 1`.
    #[test]
    fn range_soundness_exhaustive() {
        for l in 1..=12 {
            let d = 2 * l + 1;
            for a in 0..=l {
                for b in 0..=l {
                    let s = sign_function(mod_sub(a, b, d).unwrap(), l).unwrap();
                    assert_eq!(s, (a as i64 - b as i64).signum() as i8, "l={l} a={a} b={b}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn add_sub_inverse(d in 2usize..64, a in 0usize..64, b in 0usize..64) {
            let (a, b) = (a % d, b % d);
            prop_assert_eq!(mod_sub(mod_add(a, b, d).unwrap(), b, d).unwrap(), a);
            prop_assert_eq!(mod_sub(a, 0, d).unwrap(), a);
        }
    }
}
