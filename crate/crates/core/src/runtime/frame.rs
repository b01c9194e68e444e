use std::io::{Read, Write};

use crate::error::{Error, Result};

/// session id (8) + phase tag (2) + sequence (8) + payload length (4)
pub const HEADER_LEN: usize = 22;

/// Largest payload accepted from the wire (256 MiB).
pub const MAX_PAYLOAD: usize = 1 << 28;

/// One framed message. All header fields are little-endian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub session: u64,
    pub phase: u16,
    pub seq: u64,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + self.payload.len()
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        out.reserve(self.encoded_len());
        out.extend_from_slice(&self.session.to_le_bytes());
        out.extend_from_slice(&self.phase.to_le_bytes());
        out.extend_from_slice(&self.seq.to_le_bytes());
        out.extend_from_slice(&(self.payload.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.payload);
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Frame> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format(format!("frame of {} bytes", bytes.len())));
        }
        let (session, phase, seq, len) = parse_header(bytes[..HEADER_LEN].try_into().unwrap());
        if bytes.len() != HEADER_LEN + len {
            return Err(Error::Format(format!(
                "frame declares {len} payload bytes, has {}",
                bytes.len() - HEADER_LEN
            )));
        }
        Ok(Frame {
            session,
            phase,
            seq,
            payload: bytes[HEADER_LEN..].to_vec(),
        })
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        w.write_all(&self.encode())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Frame> {
        let mut header = [0u8; HEADER_LEN];
        r.read_exact(&mut header)?;
        let (session, phase, seq, len) = parse_header(&header);
        if len > MAX_PAYLOAD {
            return Err(Error::Format(format!("payload length {len} exceeds limit")));
        }
        let mut payload = vec![0u8; len];
        r.read_exact(&mut payload)?;
        Ok(Frame {
            session,
            phase,
            seq,
            payload,
        })
    }
}

fn parse_header(h: &[u8; HEADER_LEN]) -> (u64, u16, u64, usize) {
    let session = u64::from_le_bytes(h[0..8].try_into().unwrap());
    let phase = u16::from_le_bytes(h[8..10].try_into().unwrap());
    let seq = u64::from_le_bytes(h[10..18].try_into().unwrap());
    let len = u32::from_le_bytes(h[18..22].try_into().unwrap()) as usize;
    (session, phase, seq, len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_little_endian() {
        let f = Frame {
            session: 0x0102030405060708,
            phase: 0x0A0B,
            seq: 3,
            payload: vec![0xAA, 0xBB],
        };
        let bytes = f.encode();
        assert_eq!(bytes.len(), 24);
        assert_eq!(&bytes[0..8], &[8, 7, 6, 5, 4, 3, 2, 1]);
        assert_eq!(&bytes[8..10], &[0x0B, 0x0A]);
        assert_eq!(&bytes[10..18], &[3, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&bytes[18..22], &[2, 0, 0, 0]);
        assert_eq!(Frame::decode(&bytes).unwrap(), f);
        assert_eq!(Frame::read_from(&mut &bytes[..]).unwrap(), f);
        assert!(Frame::decode(&bytes[..23]).is_err());
    }
}
