//! Bit-exact 10-byte sensor frame and the simulated lossy link between the
//! nose-cone node and the pressure-control node.
//!
//! Frame layout: sync 0xAA; seq; flags (bit0 contact_left, bit1
//! contact_right); light_left u16 BE; light_right u16 BE; two reserved zero
//! bytes; XOR checksum of bytes 0–8.

use crate::sensing::{ContactFlags, LightPair};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FRAME_LEN: usize = 10;
pub const SYNC_BYTE: u8 = 0xAA;

/// The 5 Hz wire datum: everything the control node knows about the world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensorPacket {
    pub seq: u8,
    pub contact: ContactFlags,
    pub light: LightPair,
}

/// Simulated link parameters. Loss knobs default to a perfect channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub rate_hz: f64,
    pub drop_probability: f64,
    pub corrupt_probability: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            rate_hz: 5.0,
            drop_probability: 0.0,
            corrupt_probability: 0.0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), TelemetryError> {
        if !(self.rate_hz.is_finite() && self.rate_hz > 0.0) {
            return Err(TelemetryError::BadConfig("rate_hz must be > 0"));
        }
        for (name, p) in [
            ("drop_probability", self.drop_probability),
            ("corrupt_probability", self.corrupt_probability),
        ] {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(TelemetryError::BadConfig(name));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TelemetryError {
    #[error("frame length {0} != 10")]
    WrongLength(usize),
    #[error("bad sync byte {0:#04x}")]
    BadSync(u8),
    #[error("checksum mismatch: computed {computed:#04x}, frame carries {carried:#04x}")]
    BadChecksum { computed: u8, carried: u8 },
    #[error("invalid channel config: {0}")]
    BadConfig(&'static str),
}

/// Serialize a packet into its 10-byte frame.
pub fn encode(packet: &SensorPacket) -> [u8; FRAME_LEN] {
    let mut frame = [0u8; FRAME_LEN];
    frame[0] = SYNC_BYTE;
    frame[1] = packet.seq;
    frame[2] = (packet.contact.left as u8) | ((packet.contact.right as u8) << 1);
    frame[3..5].copy_from_slice(&packet.light.left.to_be_bytes());
    frame[5..7].copy_from_slice(&packet.light.right.to_be_bytes());
    frame[9] = xor_checksum(&frame[..9]);
    frame
}

/// Validate sync and checksum, then recover the packet.
pub fn decode(bytes: &[u8]) -> Result<SensorPacket, TelemetryError> {
    if bytes.len() != FRAME_LEN {
        return Err(TelemetryError::WrongLength(bytes.len()));
    }
    if bytes[0] != SYNC_BYTE {
        return Err(TelemetryError::BadSync(bytes[0]));
    }
    let computed = xor_checksum(&bytes[..9]);
    if computed != bytes[9] {
        return Err(TelemetryError::BadChecksum {
            computed,
            carried: bytes[9],
        });
    }
    Ok(SensorPacket {
        seq: bytes[1],
        contact: ContactFlags {
            left: bytes[2] & 0x01 != 0,
            right: bytes[2] & 0x02 != 0,
        },
        light: LightPair {
            left: u16::from_be_bytes([bytes[3], bytes[4]]),
            right: u16::from_be_bytes([bytes[5], bytes[6]]),
        },
    })
}

fn xor_checksum(bytes: &[u8]) -> u8 {
    bytes.iter().fold(0, |acc, b| acc ^ b)
}

/// Push one packet through the lossy link: encode, maybe drop, maybe flip a
/// random bit (the receiver then rejects the frame), decode.
///
/// A perfect channel (both probabilities zero) consumes no randomness and is
/// indistinguishable from bypassing the link.
pub fn channel_step<R: Rng>(
    packet: &SensorPacket,
    cfg: &ChannelConfig,
    rng: &mut R,
) -> Option<SensorPacket> {
    if cfg.drop_probability == 0.0 && cfg.corrupt_probability == 0.0 {
        return Some(*packet);
    }
    if rng.random::<f64>() < cfg.drop_probability {
        return None;
    }
    let mut frame = encode(packet);
    if rng.random::<f64>() < cfg.corrupt_probability {
        let bit = rng.random_range(0..FRAME_LEN * 8);
        frame[bit / 8] ^= 1 << (bit % 8);
    }
    decode(&frame).ok()
}

/// The shared point between the sensing and control tasks: a mailbox holding
/// at most the latest decoded frame. Later frames overwrite unread ones.
#[derive(Debug, Default, Clone)]
pub struct LatestFrame {
    latest: Option<SensorPacket>,
}

impl LatestFrame {
    pub fn push(&mut self, packet: SensorPacket) {
        self.latest = Some(packet);
    }

    /// Most recently delivered packet, if any ever arrived.
    pub fn latest(&self) -> Option<SensorPacket> {
        self.latest
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn packet(seq: u8, left: bool, right: bool, ll: u16, lr: u16) -> SensorPacket {
        SensorPacket {
            seq,
            contact: ContactFlags { left, right },
            light: LightPair { left: ll, right: lr },
        }
    }

    #[test]
    fn encode_zero_packet() {
        let frame = encode(&packet(0, false, false, 0, 0));
        assert_eq!(
            frame,
            [0xAA, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xAA]
        );
    }

    #[test]
    fn encode_left_contact_packet() {
        let frame = encode(&packet(1, true, false, 256, 2));
        assert_eq!(
            frame,
            [0xAA, 0x01, 0x01, 0x01, 0x00, 0x00, 0x02, 0x00, 0x00, 0xA9]
        );
    }

    #[test]
    fn round_trip() {
        let p = packet(42, true, true, 0xBEEF, 7);
        assert_eq!(decode(&encode(&p)).unwrap(), p);
    }

    #[test]
    fn wrong_length_rejected() {
        assert_eq!(decode(&[0u8; 9]).unwrap_err(), TelemetryError::WrongLength(9));
        assert_eq!(
            decode(&[0u8; 11]).unwrap_err(),
            TelemetryError::WrongLength(11)
        );
    }

    #[test]
    fn bad_sync_rejected() {
        let mut frame = encode(&packet(0, false, false, 0, 0));
        frame[0] = 0x55;
        frame[9] = frame[..9].iter().fold(0, |a, b| a ^ b); // valid checksum, bad sync
        assert_eq!(decode(&frame).unwrap_err(), TelemetryError::BadSync(0x55));
    }

    #[test]
    fn every_single_bit_flip_is_rejected() {
        let frame = encode(&packet(9, true, false, 1000, 999));
        for bit in 0..FRAME_LEN * 8 {
            let mut corrupted = frame;
            corrupted[bit / 8] ^= 1 << (bit % 8);
            assert!(decode(&corrupted).is_err(), "bit {bit} slipped through");
        }
    }

    #[test]
    fn perfect_channel_is_transparent() {
        let mut rng = crate::rng::SimRng::seed_from_u64(0);
        let before = rng.clone();
        let p = packet(3, false, true, 500, 600);
        assert_eq!(channel_step(&p, &ChannelConfig::default(), &mut rng), Some(p));
        assert_eq!(rng, before); // no randomness consumed
    }

    #[test]
    fn full_drop_never_delivers() {
        let cfg = ChannelConfig {
            drop_probability: 1.0,
            ..ChannelConfig::default()
        };
        let mut rng = crate::rng::SimRng::seed_from_u64(1);
        for seq in 0..100 {
            assert_eq!(channel_step(&packet(seq, false, false, 1, 2), &cfg, &mut rng), None);
        }
    }

    #[test]
    fn lossy_channel_is_seed_reproducible() {
        let cfg = ChannelConfig {
            drop_probability: 0.5,
            ..ChannelConfig::default()
        };
        let count = |seed: u64| {
            let mut rng = crate::rng::SimRng::seed_from_u64(seed);
            (0..1000u32)
                .filter(|i| {
                    channel_step(&packet(*i as u8, false, false, 0, 0), &cfg, &mut rng).is_some()
                })
                .count()
        };
        let a = count(1234);
        assert_eq!(a, count(1234));
        assert!((350..650).contains(&a), "delivered {a} of 1000");
    }

    #[test]
    fn corrupted_frames_never_decode_wrong() {
        let cfg = ChannelConfig {
            corrupt_probability: 1.0,
            ..ChannelConfig::default()
        };
        let mut rng = crate::rng::SimRng::seed_from_u64(7);
        for seq in 0..200 {
            // every frame has exactly one flipped bit: must vanish, not mutate
            assert_eq!(channel_step(&packet(seq, true, false, 3, 4), &cfg, &mut rng), None);
        }
    }

    #[test]
    fn latest_frame_overwrites() {
        let mut link = LatestFrame::default();
        assert_eq!(link.latest(), None);
        link.push(packet(1, false, false, 0, 0));
        link.push(packet(2, false, false, 0, 0));
        assert_eq!(link.latest().unwrap().seq, 2);
    }
}
