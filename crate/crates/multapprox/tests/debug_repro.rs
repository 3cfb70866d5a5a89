use multapprox::dyadic::Dyadic;
use multapprox::realnum::*;
use multapprox::transcend::*;
use num_rational::BigRational;
use num_bigint::BigInt;

#[test]
fn repro() {
    let s = RealSpec::sqrt(2).unwrap();
    let iv = s.eval(30);
    println!("sqrt2 eval(30): lo = {:?} e{}, hi = {:?} e{}", iv.lo().mant(), iv.lo().exp(), iv.hi().mant(), iv.hi().exp());
    let r = parse_decimal("1.41421356237309504880168872420969807856967187537694").unwrap();
    println!("contains: {}", iv.contains_ratio(&r));
    println!("lo <= r: {}", iv.lo().to_ratio() <= r);
    println!("r <= hi: {}", r <= iv.hi().to_ratio());
    let x = ln_ratio(&BigRational::new(BigInt::from(1), BigInt::from(250)), 96);
    println!("ln(1/250) = [{}, {}] width10 {}", x.lo().to_f64(), x.hi().to_f64(), x.width().to_f64());
    println!("2<2: {}", Dyadic::from_int(2) < Dyadic::from_int(2));
}
