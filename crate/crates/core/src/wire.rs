//! Byte-level encoding helpers shared by every wire format in the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("unexpected end of input: needed {needed} more bytes")]
    Truncated { needed: usize },
    #[error("{0} trailing bytes after value")]
    Trailing(usize),
    #[error("unknown type tag {found:#04x}, expected {expected:#04x}")]
    BadTag { expected: u8, found: u8 },
    #[error("non-canonical or invalid {0} encoding")]
    Invalid(&'static str),
    #[error("length {0} out of range")]
    Length(usize),
}

/// Type tags prefixed to each serialized protocol object.
pub mod tag {
    pub const PUBLIC_KEY: u8 = 0x01;
    pub const REKEY: u8 = 0x02;
    pub const CIPHERTEXT_L2: u8 = 0x03;
    pub const CIPHERTEXT_L1: u8 = 0x04;
    pub const MDVS_SIGNATURE: u8 = 0x05;
    pub const SCHNORR_SIGNATURE: u8 = 0x06;
    pub const HYBRID: u8 = 0x07;
    pub const CONTEXT: u8 = 0x08;
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.buf.len() < n {
            return Err(DecodeError::Truncated {
                needed: n - self.buf.len(),
            });
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    pub(crate) fn array<const N: usize>(&mut self) -> Result<[u8; N], DecodeError> {
        let mut out = [0u8; N];
        out.copy_from_slice(self.take(N)?);
        Ok(out)
    }

    pub(crate) fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32, DecodeError> {
        Ok(u32::from_be_bytes(self.array()?))
    }

    pub(crate) fn u64(&mut self) -> Result<u64, DecodeError> {
        Ok(u64::from_be_bytes(self.array()?))
    }

    pub(crate) fn expect_tag(&mut self, expected: u8) -> Result<(), DecodeError> {
        let found = self.u8()?;
        if found != expected {
            return Err(DecodeError::BadTag { expected, found });
        }
        Ok(())
    }

    /// u32 length prefix followed by that many bytes.
    pub(crate) fn bytes(&mut self) -> Result<&'a [u8], DecodeError> {
        let len = self.u32()? as usize;
        self.take(len)
    }

    pub(crate) fn finish(self) -> Result<(), DecodeError> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(DecodeError::Trailing(self.buf.len()))
        }
    }
}

pub(crate) fn put_bytes(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
    out.extend_from_slice(bytes);
}
