//! Brute-force dense matrices used as test oracles.

use num_complex::Complex64;

use crate::circuit::Gate;
use crate::pauli::{Letter, SignedPauli};

pub type M = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter_matrix(l: Letter) -> M {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match l {
        Letter::I => vec![vec![o, z], vec![z, o]],
        Letter::X => vec![vec![z, o], vec![o, z]],
        Letter::Y => vec![vec![z, -i], vec![i, z]],
        Letter::Z => vec![vec![o, z], vec![z, -o]],
    }
}

/// `a ⊗ b` with `a` on the high index bits.
pub fn kron(a: &M, b: &M) -> M {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn identity(d: usize) -> M {
    (0..d)
        .map(|i| (0..d).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

pub fn matmul(a: &M, b: &M) -> M {
    let d = a.len();
    let mut out = vec![vec![c(0.0, 0.0); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &M) -> M {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn scale(a: &M, s: Complex64) -> M {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Dense matrix of a signed Pauli; qubit `i` sits on index bit `i`.
pub fn pauli_matrix(p: &SignedPauli) -> M {
    let n = p.num_qubits();
    let mut m = identity(1);
    for q in (0..n).rev() {
        m = kron(&m, &letter_matrix(p.word.get(q)));
    }
    let ph = match p.phase() {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    };
    scale(&m, ph)
}

fn embed_1q(n: usize, q: usize, u: &M) -> M {
    let mut m = identity(1);
    for i in (0..n).rev() {
        m = if i == q { kron(&m, u) } else { kron(&m, &identity(2)) };
    }
    m
}

/// Dense gate matrix built from its definition.
pub fn gate_matrix(n: usize, g: Gate) -> M {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let d = 1usize << n;
    let perm = |f: &dyn Fn(usize) -> usize| -> M {
        let mut m = vec![vec![z; d]; d];
        for col in 0..d {
            m[f(col)][col] = o;
        }
        m
    };
    let diag = |f: &dyn Fn(usize) -> Complex64| -> M {
        let mut m = vec![vec![z; d]; d];
        for k in 0..d {
            m[k][k] = f(k);
        }
        m
    };
    match g {
        Gate::H(q) => embed_1q(n, q, &vec![vec![o * h, o * h], vec![o * h, -o * h]]),
        Gate::S(q) => embed_1q(n, q, &vec![vec![o, z], vec![z, i]]),
        Gate::Sdg(q) => embed_1q(n, q, &vec![vec![o, z], vec![z, -i]]),
        Gate::T(q) => embed_1q(
            n,
            q,
            &vec![vec![o, z], vec![z, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        ),
        Gate::X(q) => embed_1q(n, q, &letter_matrix(Letter::X)),
        Gate::Y(q) => embed_1q(n, q, &letter_matrix(Letter::Y)),
        Gate::Z(q) => embed_1q(n, q, &letter_matrix(Letter::Z)),
        Gate::CX(a, b) => perm(&|k| if k >> a & 1 == 1 { k ^ (1 << b) } else { k }),
        Gate::CZ(a, b) => diag(&|k| if (k >> a) & (k >> b) & 1 == 1 { -o } else { o }),
        Gate::Swap(a, b) => perm(&|k| {
            let (ba, bb) = ((k >> a) & 1, (k >> b) & 1);
            (k & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b)
        }),
    }
}

pub fn circuit_matrix(n: usize, gates: &[Gate]) -> M {
    gates
        .iter()
        .fold(identity(1 << n), |acc, &g| matmul(&gate_matrix(n, g), &acc))
}

/// All signed-free Pauli words on `n` qubits.
pub fn all_paulis(n: usize) -> Vec<SignedPauli> {
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    (0..4usize.pow(n as u32))
        .map(|mut idx| {
            let ls: Vec<Letter> = (0..n)
                .map(|_| {
                    let l = letters[idx % 4];
                    idx /= 4;
                    l
                })
                .collect();
            SignedPauli::new(crate::pauli::PauliWord::from_letters(&ls), 0)
        })
        .collect()
}
