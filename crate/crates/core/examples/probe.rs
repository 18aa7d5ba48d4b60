use paut_core::algebra::{rat, Rat, BPoly};
use paut_core::auto::{PolyAuto, Word, Token};
use paut_core::expr::parse_word;
use paut_core::tree::*;
use std::time::Instant;

fn digits(w: &Word) -> usize {
    let t = w.tail();
    let tail_d: usize = [&t.a, &t.b, &t.c, &t.e, &t.f].iter().map(|r| r.numer().to_string().len() + r.denom().to_string().len()).sum();
    tail_d + w.tokens().iter().map(|t| match t {
        Token::E(q) => q.coeffs().iter().map(|r| r.numer().to_string().len() + r.denom().to_string().len()).sum(),
        Token::A(l) => l.numer().to_string().len() + l.denom().to_string().len(),
    }).sum::<usize>()
}

fn main() {
    let e = parse_word("e(y^5 + y^4)").unwrap();
    let ei = e.inverse();
    let f0 = parse_word("e(y^5 + y^4) * a(0) * e(y^6 + y^5) * a(0) * e(y^7 + y^6) * a(0) * e(y^8 + y^7) * a(0)").unwrap();
    let c = rat(3);
    let t1 = Word::translation(Rat::from_integer(0.into()), c.clone());
    let t2 = {
        let mut fy = BPoly::y();
        fy.add_term(0, 0, -c.clone());
        PolyAuto::new(BPoly::x().scale(&rat(-1)), fy).unwrap().to_word().unwrap()
    };
    let phi1 = e.mul(&t1).mul(&ei);
    let phi2 = phi1.mul(&t2);
    let phi3 = phi2.mul(&e.mul(&t1).mul(&ei));
    let g = phi3.mul(&f0).mul(&phi3.inverse());
    let axis_g = Axis::of(&g).unwrap();
    let core = &axis_g.core;
    println!("core: {} toks, {} digits", core.tokens().len(), digits(core));
    let t0 = Instant::now();
    let ci = core.inverse();
    println!("core^-1: {} digits in {:?}", digits(&ci), t0.elapsed());
    let t0 = Instant::now();
    let c2 = ci.mul(&ci);
    println!("core^-2: {} digits in {:?}", digits(&c2), t0.elapsed());
    let t0 = Instant::now();
    let c3 = c2.mul(&ci);
    println!("core^-3: {} digits in {:?}", digits(&c3), t0.elapsed());
}
