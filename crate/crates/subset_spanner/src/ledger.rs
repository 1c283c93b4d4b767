//! Exact credit accounting for the clustering construction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::SubsetError;

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Exact rational from a finite float.
pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LedgerEvent {
    Mint {
        account: usize,
        #[serde(serialize_with = "ser_rational")]
        amount: BigRational,
        note: String,
    },
    Transfer {
        from: usize,
        to: usize,
        #[serde(serialize_with = "ser_rational")]
        amount: BigRational,
    },
    Debit {
        account: usize,
        #[serde(serialize_with = "ser_rational")]
        amount: BigRational,
        reason: String,
    },
    Defer {
        level: usize,
        #[serde(serialize_with = "ser_rational")]
        amount: BigRational,
    },
}

/// Balances per account, with a full event log.
///
/// Credit is created only by [`CreditLedger::mint`] and destroyed only by
/// [`CreditLedger::debit`], so `minted = spent + residual` holds exactly.
#[derive(Debug, Clone, Default)]
pub struct CreditLedger {
    balances: Vec<BigRational>,
    minted: BigRational,
    spent: BigRational,
    deferred: BigRational,
    events: Vec<LedgerEvent>,
}

impl CreditLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn open(&mut self) -> usize {
        self.balances.push(BigRational::zero());
        self.balances.len() - 1
    }

    pub fn balance(&self, account: usize) -> &BigRational {
        &self.balances[account]
    }

    pub fn mint(&mut self, account: usize, amount: BigRational, note: impl Into<String>) {
        self.minted += &amount;
        self.balances[account] += &amount;
        self.events.push(LedgerEvent::Mint { account, amount, note: note.into() });
    }

    /// Move the whole balance of `from` into `to`.
    pub fn sweep(&mut self, from: usize, to: usize) {
        let amount = std::mem::replace(&mut self.balances[from], BigRational::zero());
        if amount.is_zero() {
            return;
        }
        self.balances[to] += &amount;
        self.events.push(LedgerEvent::Transfer { from, to, amount });
    }

    /// Spend from an account; refuses to go below zero.
    pub fn debit(&mut self, account: usize, amount: BigRational, reason: impl Into<String>) -> Result<(), SubsetError> {
        let reason = reason.into();
        if amount.is_negative() {
            return Err(self.failure(format!("negative debit {amount} for {reason}")));
        }
        if self.balances[account] < amount {
            return Err(self.failure(format!(
                "account {account} holds {} but {reason} costs {amount}",
                self.balances[account]
            )));
        }
        self.balances[account] -= &amount;
        self.spent += &amount;
        self.events.push(LedgerEvent::Debit { account, amount, reason });
        Ok(())
    }

    /// Spend as much of `amount` as the surplus of `account` above `reserve`
    /// allows. Returns the unpaid remainder.
    pub fn debit_surplus(
        &mut self,
        account: usize,
        amount: BigRational,
        reserve: &BigRational,
        reason: &str,
    ) -> Result<BigRational, SubsetError> {
        let surplus = &self.balances[account] - reserve;
        if !surplus.is_positive() || amount.is_zero() {
            return Ok(amount);
        }
        let pay = if surplus < amount { surplus } else { amount.clone() };
        let rest = &amount - &pay;
        self.debit(account, pay, reason)?;
        Ok(rest)
    }

    /// Record spending that no account could cover yet.
    pub fn defer(&mut self, level: usize, amount: BigRational) {
        if amount.is_zero() {
            return;
        }
        self.deferred += &amount;
        self.events.push(LedgerEvent::Defer { level, amount });
    }

    /// Pay all deferred spending from `accounts`, in order.
    pub fn settle(&mut self, accounts: &[usize]) -> Result<(), SubsetError> {
        let mut owed = std::mem::replace(&mut self.deferred, BigRational::zero());
        for &a in accounts {
            if owed.is_zero() {
                break;
            }
            let zero = BigRational::zero();
            owed = self.debit_surplus(a, owed, &zero, "deferred purchases")?;
        }
        if owed.is_positive() {
            return Err(self.failure(format!("deferred purchases exceed the remaining credit by {owed}")));
        }
        Ok(())
    }

    pub fn minted(&self) -> &BigRational {
        &self.minted
    }

    pub fn spent(&self) -> &BigRational {
        &self.spent
    }

    pub fn deferred(&self) -> &BigRational {
        &self.deferred
    }

    pub fn residual(&self) -> BigRational {
        self.balances.iter().fold(BigRational::zero(), |acc, b| acc + b)
    }

    pub fn min_balance(&self) -> BigRational {
        self.balances.iter().min().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn conserved(&self) -> bool {
        self.minted == &self.spent + self.residual()
    }

    pub fn events(&self) -> &[LedgerEvent] {
        &self.events
    }

    fn failure(&self, message: String) -> SubsetError {
        SubsetError::Ledger { message, events: self.events.clone() }
    }
}

/// `c · w0 · ⌈w / w0⌉`: the credit minted for a tree edge of weight `w`.
pub fn edge_credit(c: &BigRational, w0: &BigRational, w: f64) -> BigRational {
    let w = rational(w);
    let units = (&w / w0).ceil();
    debug_assert!(units.is_integer());
    c * w0 * units
}

/// Exact integer check helper used by summaries.
pub fn is_whole(r: &BigRational) -> bool {
    r.denom() == &BigInt::from(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conservation_through_moves() {
        let mut l = CreditLedger::new();
        let a = l.open();
        let b = l.open();
        l.mint(a, rational(10.0), "seed");
        l.sweep(a, b);
        l.debit(b, rational(2.5), "edge").unwrap();
        assert!(l.conserved());
        assert_eq!(l.residual(), rational(7.5));
        assert!(l.debit(b, rational(8.0), "too much").is_err());
    }

    #[test]
    fn surplus_and_settlement() {
        let mut l = CreditLedger::new();
        let a = l.open();
        l.mint(a, rational(5.0), "seed");
        let rest = l.debit_surplus(a, rational(3.0), &rational(4.0), "buy").unwrap();
        assert_eq!(rest, rational(2.0));
        l.defer(1, rest);
        l.settle(&[a]).unwrap();
        assert_eq!(l.residual(), rational(2.0));
        assert!(l.conserved());
    }

    #[test]
    fn credit_rounds_up_to_units() {
        let c = edge_credit(&rational(2.0), &rational(0.5), 1.2);
        assert_eq!(c, rational(3.0));
        assert!(is_whole(&c));
    }
}
