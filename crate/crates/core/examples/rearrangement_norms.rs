// Lorentz, Lorentz-Zygmund, Orlicz and Orlicz-Lorentz norms of step profiles.

use anisym::norms::{lorentz_norm, lorentz_zygmund_norm, luxemburg_norm, orlicz_lorentz_norm, LorentzZygmund};
use anisym::rearrange::StepProfile;
use anisym::young::OneDimYoung;

pub fn run_example() {
    let f = StepProfile::new(vec![0.0, 0.25, 1.0, 2.0], vec![4.0, 2.0, 1.0]).unwrap();
    for (p, q) in [(2.0, 2.0), (2.0, 1.0), (2.0, f64::INFINITY), (f64::INFINITY, f64::INFINITY)] {
        println!("L^({p},{q}) = {:.6}", lorentz_norm(&f, p, q).unwrap());
    }
    let lz = LorentzZygmund::new(f64::INFINITY, 2.0, -1.0, 0.0).unwrap();
    println!("L^(inf,2)(log L)^-1 = {:.6}", lorentz_zygmund_norm(&f, &lz, 2.0).unwrap());
    let a = OneDimYoung::power(1.0, 2.0).unwrap();
    println!("Luxemburg norm for A(s) = s^2: {:.6} (L^2 norm {:.6})", luxemburg_norm(&f, &a).unwrap(), lorentz_norm(&f, 2.0, 2.0).unwrap());
    let ol = orlicz_lorentz_norm(&f, &a, 2, 2.0).unwrap();
    println!("Orlicz-Lorentz X_(A,2) = {ol:.6} against L^(inf,2)(log L)^-1 = {:.6}", lorentz_zygmund_norm(&f, &lz, 2.0).unwrap());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
