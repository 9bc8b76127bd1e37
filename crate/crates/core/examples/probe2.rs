use hblab::C64;
use nalgebra::DMatrix;
use std::time::Instant;

fn main() {
    for n in [512usize, 1024, 2048] {
        // hermitian complex matrix
        let a = DMatrix::<C64>::from_fn(n, n, |i, j| {
            C64::new(((i * 7 + j * 3) % 17) as f64 / 17.0, ((i as f64) - (j as f64)) / n as f64)
        });
        let h = &a * a.adjoint() + DMatrix::<C64>::identity(n, n) * C64::new(1.0, 0.0);

        let t0 = Instant::now();
        let chol = h.clone().cholesky().expect("pd");
        let t_chol = t0.elapsed().as_secs_f64();
        let _ = chol.l();

        let t0 = Instant::now();
        let eig = nalgebra::SymmetricEigen::new(h.clone());
        let t_eig = t0.elapsed().as_secs_f64();
        let _ = eig.eigenvalues;

        // real symmetric for comparison
        let ar = DMatrix::<f64>::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 17) as f64 / 17.0);
        let hr = &ar * ar.transpose() + DMatrix::<f64>::identity(n, n);
        let t0 = Instant::now();
        let eig_r = nalgebra::SymmetricEigen::new(hr);
        let t_eig_r = t0.elapsed().as_secs_f64();
        let _ = eig_r.eigenvalues;

        println!("n={n}: cholesky_c64={t_chol:.2}s eigen_c64={t_eig:.2}s eigen_f64={t_eig_r:.2}s");
    }
}
