use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("an election needs at least one voter")]
    NoVoters,
    #[error("an election needs at least two candidates, got {0}")]
    TooFewCandidates(usize),
    #[error("candidate id {0:?} is empty, contains whitespace, or is duplicated")]
    BadCandidateId(String),
    #[error("mix window must be at least 1")]
    ZeroMixWindow,
    #[error("each voter needs at least one credential")]
    ZeroCredentials,
    #[error("ring cap must be at least 1")]
    ZeroRingCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionConfig {
    /// |L_v|
    pub num_voters: usize,
    /// L_c, in slate order.
    pub candidates: Vec<String>,
    pub audit_enabled: bool,
    /// Ballots batched and shuffled before the anonymous channel releases them.
    pub mix_window: usize,
    /// Opaque token posted with the tally trigger.
    pub tally_date: String,
    /// Credentials (and thus independent ballots) per voter; more than one
    /// gives k-out-of-L voting.
    pub credentials_per_voter: usize,
    /// Designate only this many randomly chosen voters per credential
    /// signature instead of the full voter list.
    pub ring_cap: Option<usize>,
    /// First logical timestamp handed out by the proxy.
    pub clock_start: u64,
    pub security_tag: String,
}

impl Default for ElectionConfig {
    fn default() -> Self {
        ElectionConfig {
            num_voters: 3,
            candidates: vec!["C1".into(), "C2".into()],
            audit_enabled: false,
            mix_window: 1,
            tally_date: "tally".into(),
            credentials_per_voter: 1,
            ring_cap: None,
            clock_start: 1_700_000_000,
            security_tag: "laocoon-v1".into(),
        }
    }
}

impl ElectionConfig {
    pub fn new(num_voters: usize, candidates: &[&str]) -> Self {
        ElectionConfig {
            num_voters,
            candidates: candidates.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.num_voters == 0 {
            return Err(ConfigError::NoVoters);
        }
        self.validate_structure()
    }

    /// Everything except the voter-count floor. Benchmarks run zero-voter
    /// elections.
    pub fn validate_structure(&self) -> Result<(), ConfigError> {
        if self.candidates.len() < 2 {
            return Err(ConfigError::TooFewCandidates(self.candidates.len()));
        }
        for (i, c) in self.candidates.iter().enumerate() {
            if c.is_empty() || c.chars().any(char::is_whitespace) || self.candidates[..i].contains(c) {
                return Err(ConfigError::BadCandidateId(c.clone()));
            }
        }
        if self.mix_window == 0 {
            return Err(ConfigError::ZeroMixWindow);
        }
        if self.credentials_per_voter == 0 {
            return Err(ConfigError::ZeroCredentials);
        }
        if self.ring_cap == Some(0) {
            return Err(ConfigError::ZeroRingCap);
        }
        Ok(())
    }

    pub fn candidate_index(&self, id: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ElectionConfig::default().validate().is_ok());
        assert_eq!(ElectionConfig::new(0, &["a", "b"]).validate(), Err(ConfigError::NoVoters));
        assert!(ElectionConfig::new(0, &["a", "b"]).validate_structure().is_ok());
        assert_eq!(
            ElectionConfig::new(1, &["a"]).validate(),
            Err(ConfigError::TooFewCandidates(1))
        );
        assert_eq!(
            ElectionConfig::new(1, &["a", "a"]).validate(),
            Err(ConfigError::BadCandidateId("a".into()))
        );
        let cfg = ElectionConfig {
            mix_window: 0,
            ..Default::default()
        };
        assert_eq!(cfg.validate(), Err(ConfigError::ZeroMixWindow));
    }
}
