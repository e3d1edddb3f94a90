//! The single-computation subcommands.

use serde_json::{json, Value};

use mobius_core::foliation::{holonomy_group, leaf_through, DiscreteBundle};
use mobius_core::kgroup_solver::{solve_six_term, AbelianGroup, IntegerMap, IntegerMatrix};
use mobius_core::ktheory::{lift_projection, minimal_projections, LiftProfile};
use mobius_core::traces::{apply_trace, pair_difference, TraceFunctional};

use crate::claims::measured_boundary_classes;
use crate::config::Config;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TraceKind {
    Rho,
    Lebesgue,
}

/// Result of a subcommand, in both renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub value: Value,
    pub text: String,
}

pub fn leaves(r: f64) -> Result<CommandOutput, CliError> {
    let leaf = leaf_through(&DiscreteBundle::<f64>::mobius(), r)?;
    Ok(CommandOutput {
        value: json!({
            "basepoint": leaf.basepoint,
            "isotropy_index": leaf.isotropy_index,
            "wrap_count": leaf.wrap_count,
        }),
        text: format!(
            "leaf through r = {}: wraps {} time(s) around the core circle (isotropy index {})\n",
            leaf.basepoint, leaf.wrap_count, leaf.isotropy_index
        ),
    })
}

pub fn holonomy(r: f64) -> Result<CommandOutput, CliError> {
    let h = holonomy_group(&DiscreteBundle::<f64>::mobius(), r)?;
    let name = if h.is_trivial() {
        "trivial".to_string()
    } else {
        format!("Z{}", h.order)
    };
    Ok(CommandOutput {
        value: json!({"basepoint": r, "order": h.order}),
        text: format!("holonomy group at r = {r}: {name} (order {})\n", h.order),
    })
}

pub fn kgroups(config: &Config) -> Result<CommandOutput, CliError> {
    let [p, m, one] = measured_boundary_classes(config)?;
    let exp = IntegerMap::new(IntegerMatrix::from_rows(vec![vec![p, m]])?);
    let sol = solve_six_term(
        &AbelianGroup::free(2),
        &AbelianGroup::free(1),
        &exp,
        &AbelianGroup::trivial(),
        &AbelianGroup::trivial(),
    )?;
    let mut text = format!(
        "exp: K0(C x| Z2) = Z^2 -> K1(C0(R-) + C0(R+) x| Z2) = Z, matrix {}\n\
         boundary classes: [p+] -> {p}, [p-] -> {m}, [1_e] -> {one}\n\
         K0 = {} generated by {:?}\n\
         K1 = {}\n\
         exact: {}\n",
        exp.matrix(),
        sol.k0_middle,
        sol.k0_generators,
        sol.k1_middle,
        sol.exactness.holds()
    );
    for note in &sol.notes {
        text.push_str(&format!("note: {note}\n"));
    }
    Ok(CommandOutput {
        value: json!({
            "boundary_classes": {"p_plus": p, "p_minus": m, "one_e": one},
            "exp_matrix": exp.matrix().to_string(),
            "k0": sol.k0_middle.to_string(),
            "k0_generators": sol.k0_generators,
            "k1": sol.k1_middle.to_string(),
            "exact": sol.exactness.holds(),
            "notes": sol.notes,
        }),
        text,
    })
}

pub fn pairing(kind: TraceKind, config: &Config) -> Result<CommandOutput, CliError> {
    let grid = config.grid()?;
    let profile = LiftProfile::logistic();
    let (pp, pm) = minimal_projections();
    let (a, b) = (
        lift_projection(&pp, &profile)?,
        lift_projection(&pm, &profile)?,
    );
    let tau = match kind {
        TraceKind::Rho => TraceFunctional::rho(),
        TraceKind::Lebesgue => TraceFunctional::lebesgue(grid),
    };
    let value = pair_difference(&tau, &a, &b)?;
    let single = |x| match apply_trace(&tau, x) {
        Ok(v) => json!(v.re),
        Err(e) => json!(e.to_string()),
    };
    let (ta, tb) = (single(&a), single(&b));
    let plain = |v: &Value| v.as_str().map_or_else(|| v.to_string(), str::to_string);
    Ok(CommandOutput {
        text: format!(
            "<[p+] - [p-], tau> = {}\ntau(lift p+) = {}\ntau(lift p-) = {}\n",
            value.re,
            plain(&ta),
            plain(&tb)
        ),
        value: json!({"pairing": value.re, "tau_p_plus": ta, "tau_p_minus": tb}),
    })
}
