//! The built-in example corpus and its regression checks.

use rayon::prelude::*;
use serde::Serialize;

use super::spacefile::{FormDomain, SpaceFile};
use crate::actions::{hilbert_embed, orbit_type_partition};
use crate::error::{Error, Result};
use crate::fields::{
    check_local_completeness, classify, orbit_explore, Classification, ClassifyParams, CompletenessVerdict,
    OrbitParams,
};
use crate::forms::{find_descent_witness, DescentOutcome, PolyMap};
use crate::hamiltonian::{check_sjamaar, derive_momentum_map, reduced_strata, zero_level};
use crate::{q, qf, qpoint};

/// `(file name, contents)` of every bundled space file.
pub const CORPUS: &[(&str, &str)] = &[
    ("circle.sl", include_str!("../../data/circle.sl")),
    ("circleaction.sl", include_str!("../../data/circleaction.sl")),
    ("cone.sl", include_str!("../../data/cone.sl")),
    ("disc.sl", include_str!("../../data/disc.sl")),
    ("halfline.sl", include_str!("../../data/halfline.sl")),
    ("line.sl", include_str!("../../data/line.sl")),
    ("rotrad.sl", include_str!("../../data/rotrad.sl")),
    ("shear.sl", include_str!("../../data/shear.sl")),
    ("signflips.sl", include_str!("../../data/signflips.sl")),
    ("sniatycki.sl", include_str!("../../data/sniatycki.sl")),
    ("threeaxes.sl", include_str!("../../data/threeaxes.sl")),
    ("threelines.sl", include_str!("../../data/threelines.sl")),
    ("weights.sl", include_str!("../../data/weights.sl")),
];

/// Parses a bundled file by name.
pub fn corpus_file(name: &str) -> Result<SpaceFile> {
    let (_, text) = CORPUS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Invalid(format!("no bundled file {name}")))?;
    SpaceFile::parse(text).map_err(|e| Error::Invalid(format!("{name}: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GalleryEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

fn tangent_dim(file: &str, point: &[crate::Rational], expected: usize) -> Result<(bool, String)> {
    let f = corpus_file(file)?;
    let d = f.space.zariski_tangent(point)?.dim();
    Ok((d == expected, format!("dim {d}")))
}

fn classified(file: &str, field: &str, expected: Classification) -> Result<(bool, String)> {
    let f = corpus_file(file)?;
    let r = classify(&f.space, &f.field(field)?, &[], &ClassifyParams::default())?;
    Ok((r.verdict == expected, format!("{:?}", r.verdict)))
}

fn strata_dims(file: &str) -> Result<Vec<(usize, String)>> {
    let f = corpus_file(file)?;
    let g = f.group.as_ref().ok_or_else(|| Error::Invalid("no group".into()))?;
    let s = orbit_type_partition(g, &f.space)?;
    let mut dims: Vec<(usize, String)> =
        s.strata.iter().map(|st| (st.dim, s.orbit_types[st.orbit_type].stabilizer.clone())).collect();
    dims.sort();
    Ok(dims)
}

const CHECKS: &[(&str, Check)] = &[
    ("three lines, origin", || tangent_dim("threelines.sl", &qpoint(&[0, 0]), 2)),
    ("three lines, (2, 2)", || tangent_dim("threelines.sl", &qpoint(&[2, 2]), 1)),
    ("three axes, origin", || tangent_dim("threeaxes.sl", &qpoint(&[0, 0, 0]), 3)),
    ("circle, (1, 0)", || tangent_dim("circle.sl", &qpoint(&[1, 0]), 1)),
    ("half line, d_x", || classified("halfline.sl", "d_x", Classification::DerivationOnly)),
    ("line, d_x", || classified("line.sl", "d_x", Classification::VectorField)),
    ("open disc plus line, d_x", || classified("sniatycki.sl", "d_x", Classification::Unknown)),
    ("closed disc, rotation", || classified("disc.sl", "rot", Classification::VectorField)),
    ("shear family", || {
        let f = corpus_file("shear.sl")?;
        let fam = vec![f.field("X")?, f.field("Y")?];
        let r = check_local_completeness(&f.space, &fam, &[qpoint(&[0, 0])], &[1.0])?;
        let w = r.witnesses.iter().find(|w| w.x_index == 1 && w.y_index == 0);
        let exact = w.and_then(|w| w.exact.clone()).unwrap_or_default();
        let ok = r.verdict == CompletenessVerdict::Violated && exact == "d_x + d_y";
        Ok((ok, format!("{:?}, pushforward {exact}", r.verdict)))
    }),
    ("rotation and radial orbits", || {
        let f = corpus_file("rotrad.sl")?;
        let fam = vec![f.field("rot")?, f.field("rad")?];
        let params = OrbitParams { depth: 2, ..OrbitParams::default() };
        let o = orbit_explore(&f.space, &fam, &qpoint(&[1, 0]), &params)?;
        let z = orbit_explore(&f.space, &fam, &qpoint(&[0, 0]), &params)?;
        let ok = o.est_dim == 2
            && o.tangent_rank_along.iter().all(|&d| d == 2)
            && z.points.len() == 1
            && z.seed_delta == 0;
        Ok((ok, format!("est_dim {} from (1, 0), {} point(s) from 0", o.est_dim, z.points.len())))
    }),
    ("antipodal plane strata", || {
        let d = strata_dims("cone.sl")?;
        let dims: Vec<usize> = d.iter().map(|x| x.0).collect();
        Ok((dims == [0, 2], format!("dims {dims:?}")))
    }),
    ("sign flips strata", || {
        let d = strata_dims("signflips.sl")?;
        let dims: Vec<usize> = d.iter().map(|x| x.0).collect();
        Ok((dims == [0, 1, 1, 1, 1, 2, 2, 2, 2], format!("dims {dims:?}")))
    }),
    ("cone embedding", || {
        let f = corpus_file("cone.sl")?;
        let g = f.group.as_ref().expect("group");
        let hm = f.hilbert.as_ref().expect("hilbert");
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        let mut pts = f.space.samples().to_vec();
        pts.extend((0..24).map(|_| crate::poly::sample::random_point(&mut rng, 2)));
        let r = hilbert_embed(g, hm, &pts)?;
        Ok((r.passed(), format!("{} pairs", r.pairs_checked)))
    }),
    ("cone pullback and Sjamaar form", || {
        let f = corpus_file("cone.sl")?;
        let hm = f.hilbert.as_ref().expect("hilbert");
        let sigma = f.form("sigma", FormDomain::Hilbert)?.form;
        let area = f.form("area", FormDomain::Space)?.form;
        let pulled = PolyMap::from(hm).pullback(&sigma)?;
        let st = f.space.strata().iter().find(|s| s.name == "principal").expect("stratum");
        let r = check_sjamaar(f.group.as_ref().expect("group"), hm, st, &sigma, &area)?;
        Ok((pulled == area && r.verified, format!("pullback {}", pulled.to_string_with(f.var_names()))))
    }),
    ("cone descent of dx^dy", || {
        let f = corpus_file("cone.sl")?;
        let area = f.form("area", FormDomain::Space)?.form;
        let hm = f.hilbert.as_ref().expect("hilbert");
        let (out, s) = find_descent_witness(f.group.as_ref().expect("group"), hm, &area, None)?;
        let ok = matches!(&out, DescentOutcome::Witness(b) if PolyMap::from(hm).pullback(b)? == area);
        Ok((ok, s.witness.unwrap_or_else(|| "none".into())))
    }),
    ("circle momentum map", || {
        let f = corpus_file("circleaction.sl")?;
        let g = f.group.as_ref().expect("group");
        let w = f.symplectic.as_ref().expect("symplectic");
        let mm = derive_momentum_map(g, w)?;
        let z = zero_level(g, &mm, f.var_names().to_vec())?;
        let red = reduced_strata(g, &z, f.hilbert.as_ref())?;
        let ok = mm.verify(w)?.iter().all(|&b| b)
            && z.contains(&[q(0), q(0)])?
            && !z.contains(&[q(1), q(0)])?
            && red.stratification.strata.len() == 1;
        Ok((ok, format!("Phi = {}", mm.strings(f.var_names()).join(", "))))
    }),
    ("weights (1, -1) momentum map", || {
        let f = corpus_file("weights.sl")?;
        let g = f.group.as_ref().expect("group");
        let w = f.symplectic.as_ref().expect("symplectic");
        let mm = derive_momentum_map(g, w)?;
        let z = zero_level(g, &mm, f.var_names().to_vec())?;
        let d = z.zariski_tangent(&[q(1), q(0), q(1), q(0)])?.dim();
        let red = reduced_strata(g, &z, None)?;
        let mut dims: Vec<usize> = red.stratification.strata.iter().map(|s| s.dim).collect();
        dims.sort();
        let ok = mm.verify(w)?.iter().all(|&b| b) && d == 3 && dims == [0, 3];
        Ok((ok, format!("Phi = {}, strata dims {dims:?}", mm.strings(f.var_names()).join(", "))))
    }),
    ("antipodal plane zero level", || {
        let f = corpus_file("cone.sl")?;
        let g = f.group.as_ref().expect("group");
        let mm = derive_momentum_map(g, f.symplectic.as_ref().expect("symplectic"))?;
        let z = zero_level(g, &mm, f.var_names().to_vec())?;
        let ok = mm.components.is_empty() && z.equations().is_empty() && z.contains(&[qf(1, 2), q(3)])?;
        Ok((ok, "zero level is the whole plane".into()))
    }),
];

/// Runs every corpus check in parallel; results keep the corpus order.
pub fn run_gallery() -> Vec<GalleryEntry> {
    CHECKS
        .par_iter()
        .map(|(name, check)| match check() {
            Ok((passed, detail)) => GalleryEntry { name: name.to_string(), passed, detail },
            Err(e) => GalleryEntry { name: name.to_string(), passed: false, detail: format!("error: {e}") },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses_and_round_trips() {
        for (name, text) in CORPUS {
            let f = SpaceFile::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let canon = f.to_canonical();
            let g = SpaceFile::parse(&canon).unwrap_or_else(|e| panic!("{name} canonical: {e}\n{canon}"));
            assert_eq!(f, g, "{name}");
            assert_eq!(g.to_canonical(), canon, "{name}");
        }
    }

    #[test]
    fn gallery_is_green() {
        for e in run_gallery() {
            assert!(e.passed, "{}: {}", e.name, e.detail);
        }
    }
}
