//! Small named groups used as fixtures.

use std::sync::Arc;

use crate::group::{FiniteGroup, DEFAULT_ORDER_CAP};

fn perm_group(name: &str, degree: usize, gens: &[Vec<usize>]) -> Arc<FiniteGroup> {
    Arc::new(
        FiniteGroup::from_generators(name, degree, gens, DEFAULT_ORDER_CAP)
            .expect("fixture generators are valid permutations"),
    )
}

pub fn trivial() -> Arc<FiniteGroup> {
    perm_group("e", 1, &[])
}

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    perm_group(&format!("C{n}"), n, &[rot])
}

pub fn klein_four() -> Arc<FiniteGroup> {
    perm_group("C2xC2", 4, &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]])
}

pub fn symmetric3() -> Arc<FiniteGroup> {
    perm_group("S3", 3, &[vec![1, 2, 0], vec![1, 0, 2]])
}

/// Symmetries of the regular `n`-gon, order `2n`.
pub fn dihedral(n: usize) -> Arc<FiniteGroup> {
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    perm_group(&format!("D{n}"), n, &[rot, refl])
}

pub fn alternating4() -> Arc<FiniteGroup> {
    perm_group("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

/// Q8 through its left regular representation on `{±1, ±i, ±j, ±k}`.
pub fn quaternion() -> Arc<FiniteGroup> {
    // point 2u + s encodes the unit u ∈ {1, i, j, k} with sign (-1)^s
    fn unit_mul(a: usize, b: usize) -> (usize, bool) {
        const TABLE: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        TABLE[a][b]
    }
    let left = |u: usize| -> Vec<usize> {
        (0..8)
            .map(|p| {
                let (v, neg) = unit_mul(u, p / 2);
                2 * v + ((p % 2 == 1) ^ neg) as usize
            })
            .collect()
    };
    perm_group("Q8", 8, &[left(1), left(2)])
}

/// The fixture list used throughout the test suites.
pub fn fixtures() -> Vec<Arc<FiniteGroup>> {
    vec![
        cyclic(2),
        cyclic(3),
        cyclic(4),
        klein_four(),
        symmetric3(),
        cyclic(6),
        dihedral(4),
        quaternion(),
        alternating4(),
        dihedral(6),
    ]
}

/// Looks up a fixture by its display name (`e`, `C2`, `S3`, `D4`, ...).
pub fn by_name(name: &str) -> Option<Arc<FiniteGroup>> {
    match name {
        "e" | "C1" => Some(trivial()),
        "C2xC2" | "V4" => Some(klein_four()),
        "S3" => Some(symmetric3()),
        "Q8" => Some(quaternion()),
        "A4" => Some(alternating4()),
        _ => {
            let (kind, n) = name.split_at(1);
            let n: usize = n.parse().ok().filter(|&n| n >= 1)?;
            match kind {
                "C" => Some(cyclic(n)),
                "D" if n >= 3 => Some(dihedral(n)),
                _ => None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_orders() {
        let orders: Vec<usize> = fixtures().iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![2, 3, 4, 4, 6, 6, 8, 8, 12, 12]);
    }

    #[test]
    fn quaternion_is_nonabelian_with_unique_involution() {
        let q = quaternion();
        assert!(!q.is_abelian());
        let involutions = (1..8).filter(|&g| q.mul(g, g) == 0).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("D6").unwrap().order(), 12);
        assert_eq!(by_name("C5").unwrap().order(), 5);
        assert!(by_name("X3").is_none());
    }
}
