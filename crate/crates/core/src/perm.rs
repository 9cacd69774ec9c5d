//! Symmetric group calculus: block composition σ(τ_1,…,τ_n), ∘ᵢ products,
//! shuffle enumeration, Koszul–Quillen signs, and actions on tuples and
//! signed basis tensors.
//!
//! Permutations are stored as explicit image arrays and are 1-indexed, so
//! `σ.apply(i) = σ(i)` with i running over 1..=n.

use crate::parity::Parity;
use std::fmt;

/// A permutation of {1,…,n} as an image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    image: Vec<usize>,
}

impl Perm {
    /// Build from a 1-indexed image array: `image[i-1] = σ(i)`.
    pub fn from_image(image: Vec<usize>) -> Perm {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &v in &image {
            assert!(v >= 1 && v <= n && !seen[v], "not a bijection of 1..={}", n);
            seen[v] = true;
        }
        Perm { image }
    }

    pub fn identity(n: usize) -> Perm {
        Perm { image: (1..=n).collect() }
    }

    /// The transposition (i j) in S_n.
    pub fn transposition(n: usize, i: usize, j: usize) -> Perm {
        let mut image: Vec<usize> = (1..=n).collect();
        image.swap(i - 1, j - 1);
        Perm { image }
    }

    /// The cycle (c_1 c_2 … c_k) in S_n, mapping c_1 ↦ c_2 ↦ … ↦ c_k ↦ c_1.
    pub fn cycle(n: usize, c: &[usize]) -> Perm {
        let mut image: Vec<usize> = (1..=n).collect();
        for w in 0..c.len() {
            image[c[w] - 1] = c[(w + 1) % c.len()];
        }
        Perm::from_image(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn inverse(&self) -> Perm {
        let mut image = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v - 1] = i + 1;
        }
        Perm { image }
    }

    /// Group product στ: apply τ first, then σ.
    pub fn mul(&self, tau: &Perm) -> Perm {
        assert_eq!(self.len(), tau.len(), "arity mismatch");
        Perm {
            image: (1..=self.len()).map(|i| self.apply(tau.apply(i))).collect(),
        }
    }

    /// Block composition σ(τ_1,…,τ_n) ∈ S_{m_1+…+m_n}: the permutation acting
    /// by first permuting within each block by τ_i and then permuting the
    /// blocks themselves by σ.
    pub fn block_compose(&self, taus: &[&Perm]) -> Perm {
        let n = self.len();
        assert_eq!(taus.len(), n, "arity mismatch");
        let m: Vec<usize> = taus.iter().map(|t| t.len()).collect();
        let total: usize = m.iter().sum();
        let inv = self.inverse();
        let mut image = Vec::with_capacity(total);
        for i in 1..=n {
            // block i lands in position σ(i); its offset is the total size of
            // the blocks σ⁻¹(1), …, σ⁻¹(σ(i)−1)
            let mut offset = 0;
            for s in 1..self.apply(i) {
                offset += m[inv.apply(s) - 1];
            }
            for j in 1..=m[i - 1] {
                image.push(offset + taus[i - 1].apply(j));
            }
        }
        Perm::from_image(image)
    }

    /// The ∘ᵢ product β ∘ᵢ α = β(1,…,1,α,1,…,1) with α in slot i.
    pub fn circ(&self, i: usize, alpha: &Perm) -> Perm {
        let n = self.len();
        assert!(i >= 1 && i <= n, "index out of range");
        let id = Perm::identity(1);
        let taus: Vec<&Perm> = (1..=n).map(|j| if j == i { alpha } else { &id }).collect();
        self.block_compose(&taus)
    }

    /// Number of inversions.
    pub fn inversions(&self) -> usize {
        let n = self.len();
        let mut c = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.image[i] > self.image[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn sign(&self) -> i64 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The Koszul–Quillen sign ε_v(σ) = ∏_{i<j, σ(i)>σ(j)} (−1)^{p(v_i)p(v_j)}.
    pub fn epsilon_sign(&self, parities: &[Parity]) -> i64 {
        let n = self.len();
        assert_eq!(parities.len(), n, "length mismatch");
        let mut sign = 1i64;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.image[i] > self.image[j]
                    && parities[i].is_odd()
                    && parities[j].is_odd()
                {
                    sign = -sign;
                }
            }
        }
        sign
    }

    /// Left action on an ordered tuple: the object in slot i moves to slot σ(i),
    /// i.e. the result's slot s holds x_{σ⁻¹(s)}.
    pub fn act_on_tuple<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        assert_eq!(xs.len(), self.len(), "length mismatch");
        let inv = self.inverse();
        (1..=xs.len()).map(|s| xs[inv.apply(s) - 1].clone()).collect()
    }

    /// Signed left action on a basis tensor with the given parities:
    /// returns (ε_v(σ), permuted tuple).
    pub fn act_on_tensor<T: Clone>(&self, xs: &[T], parities: &[Parity]) -> (i64, Vec<T>) {
        (self.epsilon_sign(parities), self.act_on_tuple(xs))
    }

    /// All permutations of S_n (n ≤ 8 guard).
    pub fn all(n: usize) -> Vec<Perm> {
        assert!(n <= 8, "S_n enumeration capped at n = 8");
        let mut out = Vec::new();
        let mut image: Vec<usize> = (1..=n).collect();
        permute_rec(&mut image, 0, &mut out);
        out.sort();
        out
    }
}

fn permute_rec(image: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k == image.len() {
        out.push(Perm { image: image.clone() });
        return;
    }
    for i in k..image.len() {
        image.swap(k, i);
        permute_rec(image, k + 1, out);
        image.swap(k, i);
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "]")
    }
}

/// The set of (m_1,…,m_k)-shuffles: permutations of {1,…,Σm_i} increasing on
/// each consecutive block of m_i positions. Enumerated by choosing the
/// ascending target positions for each block rather than filtering S_n.
#[derive(Clone, Debug)]
pub struct ShuffleSet {
    pub block_sizes: Vec<i64>,
}

impl ShuffleSet {
    pub fn new(block_sizes: Vec<i64>) -> ShuffleSet {
        ShuffleSet { block_sizes }
    }

    pub fn is_empty_set(&self) -> bool {
        self.block_sizes.iter().any(|&m| m < 0)
    }

    /// Exact cardinality (Σm_i)! / ∏ m_i!, or 0 if any block size is negative.
    pub fn cardinality(&self) -> u64 {
        if self.is_empty_set() {
            return 0;
        }
        let total: i64 = self.block_sizes.iter().sum();
        let mut num = 1u64;
        let mut rem = total as u64;
        let mut den = 1u64;
        for &m in &self.block_sizes {
            for i in 1..=(m as u64) {
                num *= rem;
                rem -= 1;
                den *= i;
            }
        }
        num / den
    }

    /// Enumerate all shuffles.
    pub fn iter(&self) -> Vec<Perm> {
        if self.is_empty_set() {
            return Vec::new();
        }
        let sizes: Vec<usize> = self.block_sizes.iter().map(|&m| m as usize).collect();
        let total: usize = sizes.iter().sum();
        let mut out = Vec::new();
        let mut image = vec![0usize; total];
        shuffle_rec(&sizes, 0, 0, &mut vec![false; total + 1], &mut image, &mut out);
        out
    }
}

fn shuffle_rec(
    sizes: &[usize],
    block: usize,
    start: usize,
    used: &mut Vec<bool>,
    image: &mut Vec<usize>,
    out: &mut Vec<Perm>,
) {
    if block == sizes.len() {
        out.push(Perm::from_image(image.clone()));
        return;
    }
    let m = sizes[block];
    let total = image.len();
    // choose ascending positions for this block among the unused ones
    let free: Vec<usize> = (1..=total).filter(|&p| !used[p]).collect();
    let mut choice = vec![0usize; m];
    choose_rec(&free, 0, 0, m, &mut choice, &mut |positions: &[usize]| {
        for (j, &p) in positions.iter().enumerate() {
            image[start + j] = p;
            used[p] = true;
        }
        shuffle_rec(sizes, block + 1, start + m, used, image, out);
        for &p in positions.iter() {
            used[p] = false;
        }
    });
}

fn choose_rec(
    free: &[usize],
    from: usize,
    picked: usize,
    m: usize,
    choice: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if picked == m {
        f(choice);
        return;
    }
    for i in from..free.len() {
        if free.len() - i < m - picked {
            break;
        }
        choice[picked] = free[i];
        choose_rec(free, i + 1, picked + 1, m, choice, f);
    }
}

/// The (m,n)-shuffles S_{m,n}. S_{n,0} = S_{0,n} = {1}; empty if m or n < 0.
pub fn shuffles2(m: i64, n: i64) -> ShuffleSet {
    ShuffleSet::new(vec![m, n])
}

/// The (ℓ,m,n)-shuffles.
pub fn shuffles3(l: i64, m: i64, n: i64) -> ShuffleSet {
    ShuffleSet::new(vec![l, m, n])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_compose_identity() {
        let id3 = Perm::identity(3);
        let id2 = Perm::identity(2);
        let taus = vec![&id3, &id2];
        assert_eq!(Perm::identity(2).block_compose(&taus), Perm::identity(5));
    }

    #[test]
    fn cyclic_from_circ() {
        // (1,…,m+1) = (1,2) ∘₁ 1_m in S_{m+1}
        for m in 1..=4 {
            let t = Perm::transposition(2, 1, 2);
            let got = t.circ(1, &Perm::identity(m));
            let cyc: Vec<usize> = (1..=m + 1).collect();
            assert_eq!(got, Perm::cycle(m + 1, &cyc));
        }
    }

    #[test]
    fn circ_unit_laws() {
        // 1_n ∘ᵢ 1_m = 1_{n+m−1}
        for n in 1..=3 {
            for m in 1..=3 {
                for i in 1..=n {
                    assert_eq!(
                        Perm::identity(n).circ(i, &Perm::identity(m)),
                        Perm::identity(n + m - 1)
                    );
                }
            }
        }
    }

    #[test]
    fn circ1_image_formula() {
        // (1_n ∘₁ α)(i) = α(i) for i ≤ m, = i otherwise
        for n in 1..=3 {
            for alpha in Perm::all(3) {
                let c = Perm::identity(n).circ(1, &alpha);
                for i in 1..=3 {
                    assert_eq!(c.apply(i), alpha.apply(i));
                }
                for i in 4..=(n + 2) {
                    assert_eq!(c.apply(i), i);
                }
            }
        }
    }

    #[test]
    fn circ_nesting_identity() {
        // 1_{ℓ+1} ∘_{ℓ+1} α = (1_2 ∘₂ α) ∘₁ 1_ℓ
        for l in 1..=3 {
            for alpha in Perm::all(3) {
                let lhs = Perm::identity(l + 1).circ(l + 1, &alpha);
                let rhs = Perm::identity(2).circ(2, &alpha).circ(1, &Perm::identity(l));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn circ_associativity_exhaustive_small() {
        // (γ∘ᵢβ)∘ⱼα three-case law, all n, m, ℓ ≤ 3
        for n in 1..=3usize {
            for m in 1..=3usize {
                for l in 1..=3usize {
                    for gamma in Perm::all(n) {
                        for beta in Perm::all(m).into_iter().take(3) {
                            for alpha in Perm::all(l).into_iter().take(3) {
                                for i in 1..=n {
                                    for j in 1..=(n + m - 1) {
                                        let lhs = gamma.circ(i, &beta).circ(j, &alpha);
                                        let rhs = if j < i {
                                            gamma.circ(j, &alpha).circ(l + i - 1, &beta)
                                        } else if j < i + m {
                                            gamma.circ(i, &beta.circ(j - i + 1, &alpha))
                                        } else {
                                            gamma.circ(j - m + 1, &alpha).circ(i, &beta)
                                        };
                                        assert_eq!(lhs, rhs);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn circ_equivariance_law() {
        // (βσ) ∘ᵢ (ατ) = (β ∘_{σ(i)} α)·(σ ∘ᵢ τ)
        for n in 1..=3usize {
            for m in 1..=3usize {
                for beta in Perm::all(n).into_iter().take(4) {
                    for sigma in Perm::all(n).into_iter().take(4) {
                        for alpha in Perm::all(m).into_iter().take(3) {
                            for tau in Perm::all(m).into_iter().take(3) {
                                for i in 1..=n {
                                    let lhs = beta.mul(&sigma).circ(i, &alpha.mul(&tau));
                                    let rhs = beta
                                        .circ(sigma.apply(i), &alpha)
                                        .mul(&sigma.circ(i, &tau));
                                    assert_eq!(lhs, rhs);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shuffle_cardinalities() {
        assert_eq!(shuffles2(2, 1).cardinality(), 3);
        assert_eq!(shuffles2(2, 1).iter().len(), 3);
        assert_eq!(shuffles3(1, 1, 1).iter().len(), 6);
        assert_eq!(shuffles2(3, 0).iter(), vec![Perm::identity(3)]);
        assert_eq!(shuffles2(0, 3).iter(), vec![Perm::identity(3)]);
        assert_eq!(shuffles2(2, -1).cardinality(), 0);
        assert!(shuffles2(2, -1).iter().is_empty());
    }

    #[test]
    fn shuffles_match_bruteforce_filter() {
        for m in 0..=3i64 {
            for n in 0..=3i64 {
                let fast = shuffles2(m, n).iter();
                let total = (m + n) as usize;
                let slow: Vec<Perm> = Perm::all(total)
                    .into_iter()
                    .filter(|s| {
                        let asc = |lo: usize, hi: usize| {
                            (lo..hi).all(|i| s.apply(i) < s.apply(i + 1))
                        };
                        (m < 1 || asc(1, m as usize)) && (n < 1 || asc(m as usize + 1, total))
                    })
                    .collect();
                let mut fast_sorted = fast.clone();
                fast_sorted.sort();
                assert_eq!(fast_sorted, slow, "S_{{{},{}}}", m, n);
                assert_eq!(fast.len() as u64, shuffles2(m, n).cardinality());
            }
        }
    }

    #[test]
    fn epsilon_sign_basics() {
        let t = Perm::transposition(2, 1, 2);
        assert_eq!(t.epsilon_sign(&[Parity::Even, Parity::Even]), 1);
        assert_eq!(t.epsilon_sign(&[Parity::Odd, Parity::Odd]), -1);
        assert_eq!(t.epsilon_sign(&[Parity::Odd, Parity::Even]), 1);
        for s in Perm::all(4) {
            assert_eq!(s.epsilon_sign(&[Parity::Even; 4]), 1);
        }
    }

    #[test]
    fn epsilon_cocycle_law() {
        // ε_v(στ) = ε_{τ(v)}(σ) ε_v(τ)
        let parities = [Parity::Odd, Parity::Even, Parity::Odd];
        for s in Perm::all(3) {
            for t in Perm::all(3) {
                let st = s.mul(&t);
                let tv = t.act_on_tuple(&parities);
                assert_eq!(
                    st.epsilon_sign(&parities),
                    s.epsilon_sign(&tv) * t.epsilon_sign(&parities)
                );
            }
        }
    }

    #[test]
    fn tuple_action_is_left_action() {
        let xs = ["a", "b", "c", "d"];
        for s in Perm::all(4) {
            for t in Perm::all(4) {
                assert_eq!(
                    s.mul(&t).act_on_tuple(&xs),
                    s.act_on_tuple(&t.act_on_tuple(&xs))
                );
            }
        }
        let swap = Perm::transposition(2, 1, 2);
        assert_eq!(swap.act_on_tuple(&["a", "b"]), vec!["b", "a"]);
        assert!(Perm::identity(2).act_on_tuple(&["a", "b"]) == vec!["a", "b"]);
    }
}
