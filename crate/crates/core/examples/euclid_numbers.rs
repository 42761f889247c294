//! Euclid numbers, Euclid polynomials in both bases, the Egyptian fraction
//! identities and the constant `E`.

use euclid_companion::analysis::{egyptian_number_check, egyptian_poly_check, euclid_constant};
use euclid_companion::exact_poly::{euclid_numbers, euclid_poly, shifted_euclid_poly, unimodality_check};
use rug::Rational;

fn main() -> euclid_companion::Result<()> {
    let e = euclid_numbers(7);
    println!("e_1..e_7 = {}", e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));

    for k in 1..=4 {
        let p = euclid_poly(k)?;
        let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
        println!("E_{k}(x) ascending: [{}]", coeffs.join(", "));
    }
    let q = shifted_euclid_poly(3)?;
    let coeffs: Vec<String> = q.coeffs().iter().map(|c| c.to_string()).collect();
    println!("E_3 in u = x + 1/2: [{}]", coeffs.join(", "));

    for k in [6, 8, 10] {
        let p = euclid_poly(k)?;
        let u = unimodality_check(&p)?;
        println!(
            "E_{k}: degree {}, largest coefficient has {} digits, unimodal = {}",
            p.degree().unwrap_or(0),
            p.max_coeff().map_or(0, |c| c.to_string().len()),
            u.unimodal
        );
    }

    for n in 1..=10 {
        assert!(egyptian_number_check(n)?);
    }
    println!("1 = sum 1/e_k + 1/(e_(n+1) - 1) holds exactly for n <= 10");
    let lambda = Rational::from((3, 2));
    println!("polynomial identity at lambda = 3/2, n = 5: {:?}", egyptian_poly_check(5, &lambda)?);

    let c = euclid_constant(10, 2048)?;
    println!("E = {} ({} digits stable, floor check {})", &c.estimate[..40.min(c.estimate.len())], c.digits_stable, c.floor_check);
    Ok(())
}
