use std::collections::HashSet;

use rand::RngCore;

use super::ciphertext::{Ciphertext, KeyPair};
use super::scheme::{Message, Scheme};
use crate::bits::BitString;
use crate::error::{Error, Result};

/// Encrypt-decrypt-confirm discipline over one long-lived key pair.
///
/// Invariants: no `(r1, r2)` is used twice, and at most one block is
/// outstanding.
#[derive(Debug, Clone)]
pub struct SessionState {
    scheme: Scheme,
    keypair: KeyPair,
    used_randomness: HashSet<(Option<BitString>, Option<BitString>)>,
    confirmed_blocks: u64,
    awaiting_confirmation: bool,
}

impl SessionState {
    /// Rejects variants without public randomness (QOTP, `X^cZ^c`): their key
    /// is a one-time pad, not a reusable session key.
    pub fn new(scheme: Scheme, keypair: KeyPair) -> Result<Self> {
        if scheme.variant().randomness_count() == 0 {
            return Err(Error::InvalidScheme(format!(
                "{} has no public randomness and cannot run a session",
                scheme.variant()
            )));
        }
        if keypair.n() != scheme.n() {
            return Err(Error::LengthMismatch {
                left: keypair.n(),
                right: scheme.n(),
            });
        }
        Ok(Self {
            scheme,
            keypair,
            used_randomness: HashSet::new(),
            confirmed_blocks: 0,
            awaiting_confirmation: false,
        })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn keypair(&self) -> &KeyPair {
        &self.keypair
    }

    pub fn confirmed_blocks(&self) -> u64 {
        self.confirmed_blocks
    }

    pub fn awaiting_confirmation(&self) -> bool {
        self.awaiting_confirmation
    }

    pub fn used_randomness(&self) -> usize {
        self.used_randomness.len()
    }

    /// Encrypts the next block. Fails without side effects if the previous
    /// block is unconfirmed or the drawn randomness was already used.
    pub fn encrypt_block<R: RngCore + ?Sized>(
        &mut self,
        message: &Message,
        rng: &mut R,
    ) -> Result<Ciphertext> {
        if self.awaiting_confirmation {
            return Err(Error::UnconfirmedBlock);
        }
        let r = self.scheme.draw_randomness(rng)?;
        if self.used_randomness.contains(&r) {
            let show = |b: Option<BitString>| b.map_or_else(|| "-".into(), |b| b.to_string());
            return Err(Error::RandomnessReuse {
                r1: show(r.0),
                r2: show(r.1),
            });
        }
        let ct = self
            .scheme
            .encrypt_with(&self.keypair, message, r.0.as_ref(), r.1.as_ref())?;
        self.used_randomness.insert(r);
        self.awaiting_confirmation = true;
        Ok(ct)
    }

    /// Receiver-side decryption under the session key.
    pub fn decrypt_block(&self, ct: &Ciphertext) -> Result<Message> {
        self.scheme.decrypt(&self.keypair, ct)
    }

    pub fn confirm(&mut self) -> Result<()> {
        if !self.awaiting_confirmation {
            return Err(Error::NothingToConfirm);
        }
        self.awaiting_confirmation = false;
        self.confirmed_blocks += 1;
        Ok(())
    }

    fn randomness_space(&self) -> f64 {
        let bits = self.scheme.n() as usize * self.scheme.variant().randomness_count();
        2f64.powi(bits as i32)
    }

    /// Probability that the next uniform draw hits an already used pair.
    pub fn next_collision_probability(&self) -> f64 {
        self.used_randomness.len() as f64 / self.randomness_space()
    }

    /// Probability that `blocks` uniform draws contain a repeated pair.
    pub fn collision_probability(&self, blocks: u64) -> f64 {
        let space = self.randomness_space();
        let distinct = (0..blocks).fold(1.0, |acc, i| acc * (1.0 - i as f64 / space).max(0.0));
        1.0 - distinct
    }
}
