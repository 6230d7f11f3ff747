use std::collections::BTreeMap;

use super::distribution::{
    canonical_purification, verify_conditional_independence, InputDistribution,
};
use super::ensemble::{Ensemble, EnsembleBranch};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lineproto::{
    memory, side_holdings, simulate_line_with, InputMode, LineProtocol, RoundTrace, Side, INPUT_X,
};
use crate::qcore::{Bits, ClassicalBits, PureState};
use crate::twoparty::{
    compile_line_to_two_party, simulate_two_party_with, Party, TwoPartyProtocol, TwoPartyTranscript,
};

/// Slack allowed on every information inequality.
pub const BOUND_TOL: f64 = 1e-8;
/// Slack on the leakage bound of compiled protocols.
pub const QIL_TOL: f64 = 1e-6;

fn require_ci(mu: &InputDistribution) -> Result<()> {
    if verify_conditional_independence(mu) {
        Ok(())
    } else {
        Err(Error::Precondition(
            "X and Y are not independent given Z under this distribution".into(),
        ))
    }
}

fn distinct_inputs(mu: &InputDistribution) -> Vec<(Bits, Bits)> {
    let mut v: Vec<(Bits, Bits)> = mu
        .support()
        .iter()
        .map(|o| (o.x.clone(), o.y.clone()))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// E_z[ I(A : B) ] over the branch states chosen by `state_of`.
fn conditional_mi<'a, S: AsRef<str>, T: AsRef<str>>(
    mu: &InputDistribution,
    state_of: &dyn Fn(&Bits, &Bits) -> &'a PureState,
    a: &[S],
    b: &[T],
) -> Result<f64> {
    let mut total = 0.0;
    for z in mu.z_labels() {
        let (pz, cond) = mu.conditional(z);
        let ens = Ensemble {
            branches: cond
                .iter()
                .map(|o| EnsembleBranch {
                    x: o.x.value(),
                    y: o.y.value(),
                    weight: o.p,
                    state: state_of(&o.x, &o.y),
                })
                .collect(),
        };
        total += pz * ens.mutual_information(a, b)?;
    }
    Ok(total)
}

fn physical(params: &crate::lineproto::LineParams, t: usize, side: Side) -> Vec<String> {
    side_holdings(params, t, side, true)
        .into_iter()
        .map(|h| h.physical)
        .collect()
}

/// Everything except party 0's input, memory and purifier.
fn complement_of_party0(params: &crate::lineproto::LineParams) -> Vec<String> {
    let excluded = [INPUT_X.to_string(), "Xh".to_string(), memory(0)];
    crate::lineproto::ownership(params, 0, true)
        .into_iter()
        .map(|h| h.physical)
        .filter(|p| !excluded.contains(p))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub t: usize,
    /// I(X : D_t | Z)
    pub i_x_dt: f64,
    /// I(Y : C_t | Z)
    pub i_y_ct: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Per-round information carried across the line's end cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditTrace {
    pub b: usize,
    pub rows: Vec<AuditRow>,
}

impl AuditTrace {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Largest per-round change of either series, to compare against 2b.
    pub fn max_step(&self) -> f64 {
        self.rows
            .windows(2)
            .map(|w| {
                (w[1].i_x_dt - w[0].i_x_dt)
                    .abs()
                    .max((w[1].i_y_ct - w[0].i_y_ct).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn steps_within_2b(&self) -> bool {
        self.max_step() <= 2.0 * self.b as f64 + BOUND_TOL
    }

    /// CSV with columns `t,I_X_Dt,I_Y_Ct,bound_2tb,pass`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,I_X_Dt,I_Y_Ct,bound_2tb,pass\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{:.12},{:.12},{},{}\n",
                r.t, r.i_x_dt, r.i_y_ct, r.bound, r.pass
            ));
        }
        s
    }
}

type TraceMap = BTreeMap<(Bits, Bits), RoundTrace>;

fn line_traces(p: &LineProtocol, mu: &InputDistribution, exec: Execution) -> Result<TraceMap> {
    let inputs = distinct_inputs(mu);
    let traces = exec.map(&inputs, |(x, y)| {
        simulate_line_with(p, x, y, InputMode::Bound).map(|(_, t)| t)
    });
    inputs
        .into_iter()
        .zip(traces)
        .map(|(k, t)| t.map(|t| (k, t)))
        .collect()
}

fn audit_from_traces(
    p: &LineProtocol,
    mu: &InputDistribution,
    traces: &TraceMap,
) -> Result<AuditTrace> {
    let params = p.params();
    let mut rows = Vec::with_capacity(params.r + 1);
    for t in 0..=params.r {
        let state_of = |x: &Bits, y: &Bits| -> &PureState {
            &traces[&(x.clone(), y.clone())].snapshots[t].state
        };
        let i_x_dt = conditional_mi(mu, &state_of, &["X"], &physical(params, t, Side::Right))?;
        let i_y_ct = conditional_mi(mu, &state_of, &["Y"], &physical(params, t, Side::Left))?;
        let bound = (2 * t * params.b) as f64;
        let pass = i_x_dt <= bound + BOUND_TOL
            && i_y_ct <= bound + BOUND_TOL
            && i_x_dt >= -BOUND_TOL
            && i_y_ct >= -BOUND_TOL;
        rows.push(AuditRow {
            t,
            i_x_dt,
            i_y_ct,
            bound,
            pass,
        });
    }
    Ok(AuditTrace { b: params.b, rows })
}

/// I(X : D_t | Z) and I(Y : C_t | Z) for t = 0..r, by branch-wise assembly.
pub fn audit_line_leakage(p: &LineProtocol, mu: &InputDistribution) -> Result<AuditTrace> {
    audit_line_leakage_with(p, mu, Execution::default())
}

pub fn audit_line_leakage_with(
    p: &LineProtocol,
    mu: &InputDistribution,
    exec: Execution,
) -> Result<AuditTrace> {
    require_ci(mu)?;
    check_n(p.params().n, mu)?;
    let traces = line_traces(p, mu, exec)?;
    audit_from_traces(p, mu, &traces)
}

fn check_n(n: usize, mu: &InputDistribution) -> Result<()> {
    if mu.n() != n {
        return Err(Error::Precondition(format!(
            "distribution is over {}-bit inputs, protocol expects {n}",
            mu.n()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeakageTerm {
    pub k: usize,
    pub sender: Party,
    pub qil: f64,
    pub il: f64,
}

/// Leakage (with purifiers) and loss (without) summed over rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageReport {
    pub qil: f64,
    pub il: f64,
    pub terms: Vec<LeakageTerm>,
}

impl LeakageReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("round,sender,qil_term,il_term\n");
        for t in &self.terms {
            s.push_str(&format!(
                "{},{},{:.12},{:.12}\n",
                t.k, t.sender, t.qil, t.il
            ));
        }
        s
    }
}

type TranscriptMap = BTreeMap<(Bits, Bits), TwoPartyTranscript>;

fn two_party_transcripts(
    tp: &TwoPartyProtocol,
    mu: &InputDistribution,
    exec: Execution,
) -> Result<TranscriptMap> {
    let inputs = distinct_inputs(mu);
    let ts = exec.map(&inputs, |(x, y)| {
        simulate_two_party_with(tp, x, y, InputMode::Bound).map(|(_, t)| t)
    });
    inputs
        .into_iter()
        .zip(ts)
        .map(|(k, t)| t.map(|t| (k, t)))
        .collect()
}

fn leakage_from_transcripts(
    tp: &TwoPartyProtocol,
    mu: &InputDistribution,
    ts: &TranscriptMap,
) -> Result<LeakageReport> {
    let holdings = tp.holdings()?;
    let mut terms = Vec::with_capacity(tp.m());
    for (idx, round) in tp.rounds.iter().enumerate() {
        let k = idx + 1;
        let h = &holdings[k];
        let state_of =
            |x: &Bits, y: &Bits| -> &PureState { &ts[&(x.clone(), y.clone())].rounds[k].state };
        let (input, mut others) = match round.sender {
            Party::Alice => ("X", h.bob.clone()),
            Party::Bob => ("Y", h.alice.clone()),
        };
        let il = conditional_mi(mu, &state_of, &[input], &others)?;
        others.push(if input == "X" { "Yh" } else { "Xh" }.to_string());
        let qil = conditional_mi(mu, &state_of, &[input], &others)?;
        terms.push(LeakageTerm {
            k,
            sender: round.sender,
            qil,
            il,
        });
    }
    Ok(LeakageReport {
        qil: terms.iter().map(|t| t.qil).sum(),
        il: terms.iter().map(|t| t.il).sum(),
        terms,
    })
}

/// Σ_odd I(X : B_i Y Yh | Z) + Σ_even I(Y : A_i X Xh | Z), and the same without purifiers.
pub fn leakage_two_party(tp: &TwoPartyProtocol, mu: &InputDistribution) -> Result<LeakageReport> {
    leakage_two_party_with(tp, mu, Execution::default())
}

pub fn leakage_two_party_with(
    tp: &TwoPartyProtocol,
    mu: &InputDistribution,
    exec: Execution,
) -> Result<LeakageReport> {
    require_ci(mu)?;
    check_n(tp.n, mu)?;
    tp.validate()?;
    let ts = two_party_transcripts(tp, mu, exec)?;
    leakage_from_transcripts(tp, mu, &ts)
}

/// Block-boundary quantities of a compiled protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockIdentity {
    pub k: usize,
    /// I(X : M_{2k−1} F_{2k−2} | Z): everything Bob holds after round 2k−1.
    pub x_message_side: f64,
    /// I(X : D_{kd} | Z).
    pub x_dkd: f64,
    /// I(X : D'_{kd} | Z), D' = all registers except X, A_0 and Xh.
    pub x_dprime: f64,
    /// I(Y : E_{2k−1} M_{2k} | Z): everything Alice holds after round 2k.
    pub y_message_side: f64,
    /// I(Y : C_{kd} | Z).
    pub y_ckd: f64,
    /// 2kdb.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledAudit {
    pub trace: AuditTrace,
    pub leakage: LeakageReport,
    pub blocks: Vec<BlockIdentity>,
    /// 4r²b/d.
    pub qil_bound: f64,
}

impl CompiledAudit {
    pub fn qil_ok(&self) -> bool {
        self.leakage.qil <= self.qil_bound + QIL_TOL
    }

    pub fn qil_at_least_il(&self) -> bool {
        self.leakage.qil >= self.leakage.il - BOUND_TOL
    }

    /// Worst |I(Y : E M) − I(Y : C_{kd})|.
    pub fn y_identity_gap(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b.y_message_side - b.y_ckd).abs())
            .fold(0.0, f64::max)
    }

    /// Worst |I(X : M F) − I(X : D_{kd})|.
    pub fn x_identity_gap_strict(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b.x_message_side - b.x_dkd).abs())
            .fold(0.0, f64::max)
    }

    /// Worst |I(X : M F) − I(X : D'_{kd})|.
    pub fn x_identity_gap_corrected(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b.x_message_side - b.x_dprime).abs())
            .fold(0.0, f64::max)
    }

    /// Every block-boundary term is at most 2kdb.
    pub fn block_terms_bounded(&self) -> bool {
        self.blocks.iter().all(|b| {
            b.x_message_side <= b.bound + BOUND_TOL && b.y_message_side <= b.bound + BOUND_TOL
        })
    }
}

/// Audit a line protocol and its compiled two-party protocol together.
pub fn audit_compiled(p: &LineProtocol, mu: &InputDistribution) -> Result<CompiledAudit> {
    audit_compiled_with(p, mu, Execution::default())
}

pub fn audit_compiled_with(
    p: &LineProtocol,
    mu: &InputDistribution,
    exec: Execution,
) -> Result<CompiledAudit> {
    require_ci(mu)?;
    let params = *p.params();
    check_n(params.n, mu)?;
    let tp = compile_line_to_two_party(p)?;
    let traces = line_traces(p, mu, exec)?;
    let trace = audit_from_traces(p, mu, &traces)?;
    let ts = two_party_transcripts(&tp, mu, exec)?;
    let leakage = leakage_from_transcripts(&tp, mu, &ts)?;
    let dprime = complement_of_party0(&params);
    let mut blocks = Vec::new();
    for k in 1..=params.r / params.d {
        let t = k * params.d;
        let state_of = |x: &Bits, y: &Bits| -> &PureState {
            &traces[&(x.clone(), y.clone())].snapshots[t].state
        };
        blocks.push(BlockIdentity {
            k,
            x_message_side: leakage.terms[2 * k - 2].qil,
            x_dkd: trace.rows[t].i_x_dt,
            x_dprime: conditional_mi(mu, &state_of, &["X"], &dprime)?,
            y_message_side: leakage.terms[2 * k - 1].qil,
            y_ckd: trace.rows[t].i_y_ct,
            bound: (2 * t * params.b) as f64,
        });
    }
    let r = params.r as f64;
    Ok(CompiledAudit {
        trace,
        leakage,
        blocks,
        qil_bound: 4.0 * r * r * params.b as f64 / params.d as f64,
    })
}

fn purified_initial(
    work: &crate::qcore::RegisterLayout,
    mu: &InputDistribution,
) -> Result<PureState> {
    canonical_purification(mu)?.tensor(&PureState::zero(work.clone()))
}

/// Reference path: simulate the full purified state and condition on the Z register.
pub fn monolithic_line_audit(p: &LineProtocol, mu: &InputDistribution) -> Result<Vec<(f64, f64)>> {
    require_ci(mu)?;
    let params = *p.params();
    check_n(params.n, mu)?;
    p.validate().into_result()?;
    let mut state = purified_initial(&params.work_layout()?, mu)?;
    let none = ClassicalBits::new();
    let mut out = Vec::new();
    for t in 0..=params.r {
        if t > 0 {
            p.run_round(&mut state, t, &none)?;
        }
        let ix = state.conditional_mutual_information(
            &["X"],
            &physical(&params, t, Side::Right),
            &["Z"],
        )?;
        let iy = state.conditional_mutual_information(
            &["Y"],
            &physical(&params, t, Side::Left),
            &["Z"],
        )?;
        out.push((ix, iy));
    }
    Ok(out)
}

/// Reference path for [`leakage_two_party`].
pub fn monolithic_two_party_leakage(
    tp: &TwoPartyProtocol,
    mu: &InputDistribution,
) -> Result<LeakageReport> {
    require_ci(mu)?;
    check_n(tp.n, mu)?;
    tp.validate()?;
    let holdings = tp.holdings()?;
    let mut state = purified_initial(&tp.work_layout()?, mu)?;
    let none = ClassicalBits::new();
    let mut terms = Vec::new();
    for (idx, round) in tp.rounds.iter().enumerate() {
        for g in &round.gates {
            state.apply_gate(g, &none)?;
        }
        let h = &holdings[idx + 1];
        let (input, mut others, hat) = match round.sender {
            Party::Alice => ("X", h.bob.clone(), "Yh"),
            Party::Bob => ("Y", h.alice.clone(), "Xh"),
        };
        let il = state.conditional_mutual_information(&[input], &others, &["Z"])?;
        others.push(hat.into());
        let qil = state.conditional_mutual_information(&[input], &others, &["Z"])?;
        terms.push(LeakageTerm {
            k: idx + 1,
            sender: round.sender,
            qil,
            il,
        });
    }
    Ok(LeakageReport {
        qil: terms.iter().map(|t| t.qil).sum(),
        il: terms.iter().map(|t| t.il).sum(),
        terms,
    })
}
