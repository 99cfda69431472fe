//! Named verification suites, selectable at runtime (`verify --suite NAME`).

use std::sync::Arc;

use crate::adams::{g_poly, psi_oracle, psi_series, verify_g_identity};
use crate::kring::{
    relation3_redundancy, verify_commuting_square, verify_local_confluence,
    verify_minimality_witness, verify_relations_in_r,
};
use crate::lens::{verify_relations_vanish, verify_restriction_hom};
use crate::rep_ring::{verify_orthogonality, verify_structure_constants, GroupParams};
use crate::report::{Check, Report};
use crate::Error;

/// Random trials used by the restriction suite; the seed keeps output stable.
pub const RESTRICTION_TRIALS: usize = 32;
pub const RESTRICTION_SEED: u64 = 0x51_4b;

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, params: GroupParams) -> Result<Report, Error>;
}

struct Relations;

impl Suite for Relations {
    fn name(&self) -> &'static str {
        "relations"
    }
    fn description(&self) -> &'static str {
        "relations 1-6, ψ identities and 4kφ = f(φ)φ² hold exactly in R(Q)"
    }
    fn run(&self, params: GroupParams) -> Result<Report, Error> {
        Ok(verify_relations_in_r(params)?)
    }
}

struct Oracle;

impl Suite for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }
    fn description(&self) -> &'static str {
        "rewriting products vs character table; ψ series vs Chebyshev recurrence"
    }
    fn run(&self, params: GroupParams) -> Result<Report, Error> {
        let mut report = Report::new(format!("oracle equivalence (n = {})", params.n()));
        report.extend(verify_structure_constants(params));
        report.extend(verify_orthogonality(params));
        let k = params.k();
        let top = 2 * k + 1;
        let mut bad = Vec::new();
        for i in 1..=top {
            if psi_series(i)? != psi_oracle(i)? {
                bad.push(i.to_string());
            }
        }
        report.push(Check::new(
            format!("ψ^i series = Chebyshev construction for 1 <= i <= {top}"),
            bad.is_empty(),
            bad.join(", "),
        ));
        report.push(Check::new(
            format!("g_{} = ψ^{} − ψ^{}", 2 * k, k + 1, k - 1),
            verify_g_identity(k),
            g_poly(k)?.to_string(),
        ));
        Ok(report)
    }
}

struct Redundancy;

impl Suite for Redundancy {
    fn name(&self) -> &'static str {
        "redundancy"
    }
    fn description(&self) -> &'static str {
        "(φ+2)·(relation 6) reduces to ±g_2k using relations 1, 2, 4, 5 only"
    }
    fn run(&self, params: GroupParams) -> Result<Report, Error> {
        let r = relation3_redundancy(params)?;
        let mut report = Report::new(format!("relation 3 is redundant (n = {})", params.n()));
        let sign = match r.sign {
            Some(1) => "+",
            Some(_) => "−",
            None => "?",
        };
        report.push(Check::new(
            "(φ+2)·(relation 6) reduces to ±g",
            r.holds(),
            format!("result {} = {sign}g_{}", r.reduced, 2 * params.k()),
        ));
        Ok(report)
    }
}

struct Minimality;

impl Suite for Minimality {
    fn name(&self) -> &'static str {
        "minimality"
    }
    fn description(&self) -> &'static str {
        "each of relations 1, 2, 4, 5, 6 is needed to close the normal form"
    }
    fn run(&self, params: GroupParams) -> Result<Report, Error> {
        Ok(verify_minimality_witness(params)?)
    }
}

struct Restriction;

impl Suite for Restriction {
    fn name(&self) -> &'static str {
        "restriction"
    }
    fn description(&self) -> &'static str {
        "restriction to the cyclic subgroup is a ring map killing every relation"
    }
    fn run(&self, params: GroupParams) -> Result<Report, Error> {
        let mut report = verify_restriction_hom(params, RESTRICTION_TRIALS, RESTRICTION_SEED);
        report.extend(verify_relations_vanish(params)?);
        Ok(report)
    }
}

struct Confluence;

impl Suite for Confluence {
    fn name(&self) -> &'static str {
        "confluence"
    }
    fn description(&self) -> &'static str {
        "local confluence at critical monomials, commuting square, unimodular basis change"
    }
    fn run(&self, params: GroupParams) -> Result<Report, Error> {
        let mut report = verify_local_confluence(params)?;
        report.extend(verify_commuting_square(params)?);
        Ok(report)
    }
}

/// Name-keyed registry of [`Suite`]s, kept in registration order.
#[derive(Clone)]
pub struct SuiteRegistry {
    suites: Vec<Arc<dyn Suite>>,
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        SuiteRegistry { suites: Vec::new() }
    }

    /// Registers a suite, replacing any earlier one with the same name.
    pub fn register(&mut self, suite: Arc<dyn Suite>) {
        self.suites.retain(|s| s.name() != suite.name());
        self.suites.push(suite);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Suite>> {
        self.suites.iter().find(|s| s.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn Suite>> {
        self.suites.iter()
    }

    /// Resolves `"all"` to every suite, anything else to the single named one.
    pub fn select(&self, name: &str) -> Option<Vec<Arc<dyn Suite>>> {
        if name == "all" {
            Some(self.suites.clone())
        } else {
            self.get(name).map(|s| vec![s])
        }
    }
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(Relations));
        r.register(Arc::new(Oracle));
        r.register(Arc::new(Redundancy));
        r.register(Arc::new(Minimality));
        r.register(Arc::new(Restriction));
        r.register(Arc::new(Confluence));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_names() {
        let r = SuiteRegistry::default();
        assert_eq!(
            r.names(),
            vec![
                "relations",
                "oracle",
                "redundancy",
                "minimality",
                "restriction",
                "confluence"
            ]
        );
        assert_eq!(r.select("all").unwrap().len(), 6);
        assert!(r.select("bogus").is_none());
    }

    #[test]
    fn register_replaces() {
        struct Dummy;
        impl Suite for Dummy {
            fn name(&self) -> &'static str {
                "oracle"
            }
            fn description(&self) -> &'static str {
                "stand-in"
            }
            fn run(&self, params: GroupParams) -> Result<Report, Error> {
                Ok(Report::new(format!("dummy {}", params.n())))
            }
        }
        let mut r = SuiteRegistry::default();
        r.register(Arc::new(Dummy));
        assert_eq!(r.names().len(), 6);
        assert_eq!(r.get("oracle").unwrap().description(), "stand-in");
    }

    #[test]
    fn all_pass_for_q8_and_q16() {
        let r = SuiteRegistry::default();
        for n in [3, 4] {
            let params = GroupParams::new(n).unwrap();
            for suite in r.iter() {
                let report = suite.run(params).unwrap();
                assert!(report.all_pass(), "{}: {report}", suite.name());
            }
        }
    }
}
