//! Cache-blocked complex matrix product.
//!
//! The i-k-j loop order streams rows of the right factor and the output,
//! which is what makes the large Hankel/Foguel oracle products feasible.
//! With the `parallel` feature the output rows are split across threads;
//! every entry is still produced by a single thread with a fixed k-order,
//! so results are bit-identical to the sequential product.

use num_complex::Complex64;

use super::Operator;

#[cfg(feature = "parallel")]
const ROW_CHUNK: usize = 16;

pub(crate) fn matmul(a: &Operator, b: &Operator) -> Operator {
    let (m, k, n) = (a.rows(), a.cols(), b.cols());
    let mut out = Operator::zeros(m, n);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if m * k * n >= 1 << 21 {
            let b_data = b.data();
            out.data_mut()
                .par_chunks_mut(ROW_CHUNK * n)
                .enumerate()
                .for_each(|(chunk, rows)| {
                    let i0 = chunk * ROW_CHUNK;
                    for (di, out_row) in rows.chunks_mut(n).enumerate() {
                        mul_row(a.row(i0 + di), b_data, k, n, out_row);
                    }
                });
            return out;
        }
    }

    let b_data = b.data();
    for i in 0..m {
        let lo = i * n;
        mul_row(a.row(i), b_data, k, n, &mut out.data_mut()[lo..lo + n]);
    }
    out
}

#[inline]
fn mul_row(a_row: &[Complex64], b: &[Complex64], k: usize, n: usize, out: &mut [Complex64]) {
    for (kk, &aik) in a_row.iter().enumerate().take(k) {
        if aik.re == 0.0 && aik.im == 0.0 {
            continue;
        }
        let b_row = &b[kk * n..kk * n + n];
        for (o, &bv) in out.iter_mut().zip(b_row) {
            *o += aik * bv;
        }
    }
}
