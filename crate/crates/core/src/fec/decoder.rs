//! Flooding sum-product (belief propagation) decoder.

use super::ldpc::LdpcCode;
use crate::error::{invalid, Result};

// Keeps 2*atanh finite; corresponds to a message magnitude of about 29.
const MAX_TANH: f64 = 1.0 - 1e-12;
const MAX_LLR: f64 = 60.0;

/// Working buffers for one decoder instance. Each worker owns one.
#[derive(Debug, Default, Clone)]
pub struct DecoderScratch {
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    tanh: Vec<f64>,
    posterior: Vec<f64>,
    hard: Vec<u8>,
}

impl DecoderScratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn resize(&mut self, code: &LdpcCode) {
        let e = code.num_edges();
        self.v2c.resize(e, 0.0);
        self.c2v.resize(e, 0.0);
        self.tanh.resize(e, 0.0);
        self.posterior.resize(code.n(), 0.0);
        self.hard.resize(code.n(), 0);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Hard decision on the message bits of the final estimate.
    pub message: Vec<u8>,
    /// A valid codeword was reached within the iteration cap.
    pub converged: bool,
    /// Iterations performed (0 if the channel decision was already valid).
    pub iterations: usize,
}

impl LdpcCode {
    /// Decodes channel LLRs (positive favours bit 0).
    pub fn decode(&self, llrs: &[f64]) -> Result<DecodeOutcome> {
        self.decode_with(llrs, &mut DecoderScratch::new())
    }

    /// Like [`LdpcCode::decode`] but reuses caller-owned buffers.
    pub fn decode_with(&self, llrs: &[f64], s: &mut DecoderScratch) -> Result<DecodeOutcome> {
        if llrs.len() != self.n() {
            return invalid(format!(
                "{} LLRs supplied, code length is {}",
                llrs.len(),
                self.n()
            ));
        }
        if let Some(i) = llrs.iter().position(|l| !l.is_finite()) {
            return invalid(format!("LLR {i} is not finite"));
        }
        s.resize(self);

        for v in 0..self.n() {
            let l = llrs[v].clamp(-MAX_LLR, MAX_LLR);
            s.posterior[v] = l;
            for &e in &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]] {
                s.v2c[e] = l;
            }
        }
        if self.hard_decide(s) {
            return Ok(self.outcome(s, true, 0));
        }

        for iter in 1..=self.max_iterations() {
            // check nodes: c2v = 2 atanh(prod_{others} tanh(v2c / 2))
            for c in 0..self.num_checks() {
                let (lo, hi) = (self.check_ptr[c], self.check_ptr[c + 1]);
                for e in lo..hi {
                    // tanh(x/2) = (e^x - 1) / (e^x + 1)
                    let t = s.v2c[e].exp();
                    s.tanh[e] = (t - 1.0) / (t + 1.0);
                }
                // forward prefix products stored in c2v, then a backward sweep
                let mut acc = 1.0;
                for e in lo..hi {
                    s.c2v[e] = acc;
                    acc *= s.tanh[e];
                }
                let mut acc = 1.0;
                for e in (lo..hi).rev() {
                    let p = (s.c2v[e] * acc).clamp(-MAX_TANH, MAX_TANH);
                    s.c2v[e] = ((1.0 + p) / (1.0 - p)).ln();
                    acc *= s.tanh[e];
                }
            }
            // variable nodes
            for v in 0..self.n() {
                let edges = &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]];
                let total = llrs[v].clamp(-MAX_LLR, MAX_LLR)
                    + edges.iter().map(|&e| s.c2v[e]).sum::<f64>();
                s.posterior[v] = total;
                for &e in edges {
                    s.v2c[e] = (total - s.c2v[e]).clamp(-MAX_LLR, MAX_LLR);
                }
            }
            if self.hard_decide(s) {
                return Ok(self.outcome(s, true, iter));
            }
        }
        Ok(self.outcome(s, false, self.max_iterations()))
    }

    /// Hard-decides the posteriors and reports whether all checks hold.
    /// A zero posterior is an erasure and blocks convergence.
    fn hard_decide(&self, s: &mut DecoderScratch) -> bool {
        let mut erased = false;
        for (h, &p) in s.hard.iter_mut().zip(&s.posterior) {
            *h = u8::from(p < 0.0);
            erased |= p == 0.0;
        }
        !erased
            && (0..self.num_checks()).all(|c| {
                self.check(c).iter().fold(0u8, |acc, &v| acc ^ s.hard[v]) == 0
            })
    }

    fn outcome(&self, s: &DecoderScratch, converged: bool, iterations: usize) -> DecodeOutcome {
        DecodeOutcome {
            message: self.message_of(&s.hard),
            converged,
            iterations,
        }
    }
}
