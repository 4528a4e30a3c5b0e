use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::grading::Grade;
use super::FitError;
use crate::genpoly::GenMonomial;
use crate::kernel::{ExponentVector, Var};
use crate::RationalForm;

/// A named function the ansatz is built from.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub form: Arc<RationalForm>,
    pub degree: u32,
    pub grade: Option<Grade>,
    /// Whether powers of this generator count toward the generator-degree cap.
    /// `H` in the closure ansatz is a coefficient generator and does not.
    pub counts_toward_degree: bool,
}

impl Generator {
    pub fn new(name: &str, form: RationalForm) -> Result<Self, FitError> {
        let degree = form.momentum_degree().map_err(|_| FitError::ZeroGenerator(name.to_string()))?;
        let grade = Grade::of_form(&form);
        Ok(Generator { name: name.to_string(), form: Arc::new(form), degree, grade, counts_toward_degree: true })
    }

    pub fn coefficient(mut self) -> Self {
        self.counts_toward_degree = false;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum momentum degree of an element.
    pub momentum: u32,
    /// Maximum exponent of each parameter.
    pub param_exponent: u32,
    /// Maximum total degree in the generators that count toward it.
    pub generator_degree: u32,
    /// Guard on the number of elements.
    pub max_elements: usize,
}

impl Caps {
    pub const DEFAULT_PARAM_EXPONENT: u32 = 4;
    pub const DEFAULT_MAX_ELEMENTS: usize = 50_000;

    pub fn new(momentum: u32, generator_degree: u32) -> Self {
        Caps {
            momentum,
            param_exponent: Self::DEFAULT_PARAM_EXPONENT,
            generator_degree,
            max_elements: Self::DEFAULT_MAX_ELEMENTS,
        }
    }

    pub fn with_param_exponent(mut self, n: u32) -> Self {
        self.param_exponent = n;
        self
    }
}

/// Generator monomial times parameter monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    /// Exponents aligned with [`AnsatzBasis::generators`].
    pub gens: Vec<u32>,
    /// Exponents of `k, k1, k2, k3`.
    pub params: [u8; 4],
}

impl BasisElement {
    pub fn param_monomial(&self) -> ExponentVector {
        let mut e = ExponentVector::ONE;
        for (v, p) in Var::PARAMS.iter().zip(self.params) {
            e.set(*v, p);
        }
        e
    }

    pub fn monomial(&self, generators: &[Generator]) -> GenMonomial {
        let gens = generators.iter().zip(&self.gens).map(|(g, e)| (g.name.clone(), *e));
        let params = Var::PARAMS.iter().zip(self.params).map(|(v, p)| (v.name().to_string(), u32::from(p)));
        GenMonomial::from_pairs(gens.chain(params))
    }
}

/// Shared cache of expanded generator monomials, keyed by exponent vector.
#[derive(Default, Debug)]
pub struct ExpansionCache {
    map: Mutex<HashMap<Vec<u32>, Arc<RationalForm>>>,
}

impl ExpansionCache {
    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Expansion of `prod g_i^{e_i}`, built from the next smaller monomial.
    pub fn expand(&self, generators: &[Generator], exps: &[u32]) -> Arc<RationalForm> {
        if let Some(f) = self.map.lock().unwrap().get(exps) {
            return f.clone();
        }
        let value = match exps.iter().position(|&e| e > 0) {
            None => Arc::new(RationalForm::one()),
            Some(i) => {
                let mut smaller = exps.to_vec();
                smaller[i] -= 1;
                let base = self.expand(generators, &smaller);
                Arc::new(base.mul(&generators[i].form))
            }
        };
        self.map.lock().unwrap().entry(exps.to_vec()).or_insert(value).clone()
    }
}

/// Enumerated ansatz: generators, elements in a fixed order, and caps.
#[derive(Clone, Debug)]
pub struct AnsatzBasis {
    pub generators: Vec<Generator>,
    pub elements: Vec<BasisElement>,
    pub caps: Caps,
    pub cache: Arc<ExpansionCache>,
}

impl AnsatzBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Canonical phase-space expansion of one element.
    pub fn expand(&self, el: &BasisElement) -> RationalForm {
        self.cache.expand(&self.generators, &el.gens).mul_param_monomial(&el.param_monomial())
    }

    /// Same generators and cache, elements restricted by `keep`.
    pub fn filtered(&self, keep: impl Fn(&BasisElement) -> bool) -> AnsatzBasis {
        AnsatzBasis {
            generators: self.generators.clone(),
            elements: self.elements.iter().filter(|e| keep(e)).cloned().collect(),
            caps: self.caps,
            cache: self.cache.clone(),
        }
    }

    /// Weight of an element, when every generator is homogeneous.
    pub fn grade_of(&self, el: &BasisElement) -> Option<Grade> {
        let mut g = Grade::of_monomial(&el.param_monomial());
        for (gen, &e) in self.generators.iter().zip(&el.gens) {
            if e > 0 {
                g = g + gen.grade? * e as i32;
            }
        }
        Some(g)
    }
}

/// All elements within `caps`, optionally only those of weight `grade`.
///
/// Elements are ordered by generator degree, then generator exponents
/// (earlier generators first), then parameter degree.
pub fn enumerate_basis(
    generators: Vec<Generator>,
    caps: Caps,
    grade: Option<Grade>,
    cache: Option<Arc<ExpansionCache>>,
) -> Result<AnsatzBasis, FitError> {
    let mut gen_monos = Vec::new();
    let mut current = vec![0u32; generators.len()];
    collect_gen_monomials(&generators, &caps, 0, 0, 0, &mut current, &mut gen_monos);
    gen_monos.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });

    let pe = caps.param_exponent.min(u32::from(u8::MAX)) as u8;
    let mut params: Vec<[u8; 4]> = Vec::new();
    for a in 0..=pe {
        for b in 0..=pe {
            for c in 0..=pe {
                for d in 0..=pe {
                    params.push([a, b, c, d]);
                }
            }
        }
    }
    params.sort_by_key(|p| (p.iter().map(|&e| u32::from(e)).sum::<u32>(), std::cmp::Reverse(*p)));

    let gen_grades: Option<Vec<Grade>> = generators.iter().map(|g| g.grade).collect();
    let filter = grade.zip(gen_grades);

    let mut elements = Vec::new();
    for gm in &gen_monos {
        let base = filter.as_ref().map(|(_, gg)| {
            gg.iter().zip(gm).fold(Grade::default(), |acc, (g, &e)| acc + *g * e as i32)
        });
        for p in &params {
            let el = BasisElement { gens: gm.clone(), params: *p };
            if let (Some((target, _)), Some(base)) = (&filter, base) {
                if base + Grade::of_monomial(&el.param_monomial()) != *target {
                    continue;
                }
            }
            elements.push(el);
            if elements.len() > caps.max_elements {
                return Err(FitError::CapTooLarge { limit: caps.max_elements });
            }
        }
    }
    Ok(AnsatzBasis { generators, elements, caps, cache: cache.unwrap_or_default() })
}

fn collect_gen_monomials(
    gens: &[Generator],
    caps: &Caps,
    i: usize,
    momentum: u32,
    degree: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if i == gens.len() {
        out.push(current.clone());
        return;
    }
    let g = &gens[i];
    let mut e = 0;
    loop {
        let m = momentum + e * g.degree;
        let d = degree + if g.counts_toward_degree { e } else { 0 };
        let within = m <= caps.momentum && d <= caps.generator_degree && e <= caps.generator_degree.max(caps.momentum);
        if !within {
            break;
        }
        current[i] = e;
        collect_gen_monomials(gens, caps, i + 1, m, d, current, out);
        e += 1;
    }
    current[i] = 0;
}
