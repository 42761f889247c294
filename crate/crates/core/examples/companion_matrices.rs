//! Height-one companion matrices: construction, exact verification,
//! construction variants, the Mandelbrot family and Matrix Market export.

use euclid_companion::companion::{
    build_companion, build_mandelbrot_companion, euclid_companion, export_matrix, verify_charpoly,
    verify_mandelbrot_charpoly, E2Seed, MatrixFormat, VariantConfig,
};

fn main() -> euclid_companion::Result<()> {
    for k in [2, 3, 4] {
        let m = euclid_companion(k)?;
        println!("E_{k} ({}x{}):", m.n(), m.n());
        for row in m.to_dense_i64() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
            println!("  {}", cells.join(" "));
        }
    }

    for k in 1..=9 {
        let m = euclid_companion(k)?;
        let v = verify_charpoly(k, &VariantConfig::default())?;
        println!(
            "k = {k}: dimension {:>3}, nnz {:>4}, height {}, det(xI - E_k) = E_k(x): {}",
            m.n(),
            m.nnz(),
            m.height(),
            v.verified
        );
    }

    let swapped = VariantConfig {
        e2_seed: E2Seed::SwappedNegated,
        block_order: Some(vec![2, 0, 3, 1]),
    };
    println!(
        "k = 5 with seed {:?} and block order {:?}: verified = {}",
        swapped.e2_seed,
        swapped.block_order.as_deref().unwrap_or_default(),
        verify_charpoly(5, &swapped)?.verified
    );
    assert_ne!(build_companion(5, &swapped)?, euclid_companion(5)?);

    let m4 = build_mandelbrot_companion(4)?;
    println!("Mandelbrot M_4: {}x{}, verified = {}", m4.n(), m4.n(), verify_mandelbrot_charpoly(4)?.verified);

    let mtx = export_matrix(&euclid_companion(3)?, MatrixFormat::MatrixMarket);
    print!("{}", String::from_utf8_lossy(&mtx));
    Ok(())
}
