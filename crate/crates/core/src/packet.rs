//! Packet-level FEC: a byte stream is laid out as matrices whose columns
//! are codewords and whose rows travel as packets.
//!
//! Each matrix has `n` rows of `packet_bits` bits. Information bit `t` of a
//! matrix sits in row `info_positions[t / packet_bits]`, column
//! `t % packet_bits`; the remaining rows are parity. The information bits
//! of all matrices, concatenated, hold the stream (bytes MSB first), zero
//! padding, and the stream length in bytes as a 64-bit big-endian trailer
//! in the last 64 bits.
//!
//! Wire format, all fields big-endian:
//!
//! | offset | size | field |
//! |---|---|---|
//! | 0 | 8 | stream id |
//! | 8 | 4 | matrix index |
//! | 12 | 2 | row index |
//! | 14 | 2 | payload length in bits |
//! | 16 | 4 | CRC-32 of bytes 0..16 followed by the payload |
//! | 20 | ⌈bits/8⌉ | payload, MSB first, zero padded |

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::ReceivedWord;
use crate::codes::Code;
use crate::decoders::{Decoder, InPlaceSchedule};
use crate::gf2::BitVec;

pub const HEADER_LEN: usize = 20;
const TRAILER_BITS: usize = 64;
/// Packet lengths outside this range draw a warning.
pub const TYPICAL_PACKET_BITS: std::ops::RangeInclusive<usize> = 30..=1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PacketError {
    #[error("packet length must be 1..=65535 bits, got {0}")]
    PacketBits(usize),
    #[error("code ({n},{k}) cannot carry packets: need 1 <= k and n <= 65536")]
    UnusableCode { n: usize, k: usize },
    #[error("packet truncated: {needed} bytes needed, {available} available")]
    Truncated { needed: usize, available: usize },
    #[error("checksum mismatch")]
    Checksum,
    #[error("no valid packets")]
    NoPackets,
    #[error("packets from several streams: {0:?}")]
    MixedStreams(Vec<u64>),
    #[error("{} of {total} matrices undecodable", failures.len())]
    Undecodable {
        total: usize,
        failures: Vec<MatrixFailure>,
    },
    #[error("length trailer inconsistent: {0}")]
    BadTrailer(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PacketHeader {
    pub stream_id: u64,
    pub matrix: u32,
    pub row: u16,
    pub payload_bits: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub header: PacketHeader,
    pub payload: BitVec,
}

impl Packet {
    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len().div_ceil(8));
        out.extend_from_slice(&h.stream_id.to_be_bytes());
        out.extend_from_slice(&h.matrix.to_be_bytes());
        out.extend_from_slice(&h.row.to_be_bytes());
        out.extend_from_slice(&h.payload_bits.to_be_bytes());
        let payload = pack_bits(&self.payload);
        let crc = checksum(&out, &payload);
        out.extend_from_slice(&crc.to_be_bytes());
        out.extend_from_slice(&payload);
        out
    }

    /// Parses one packet from the front of `bytes`; returns it with the
    /// number of bytes consumed.
    pub fn parse(bytes: &[u8]) -> Result<(Packet, usize), PacketError> {
        if bytes.len() < HEADER_LEN {
            return Err(PacketError::Truncated {
                needed: HEADER_LEN,
                available: bytes.len(),
            });
        }
        let be = |r: std::ops::Range<usize>| bytes[r].iter().fold(0u64, |a, &b| a << 8 | b as u64);
        let header = PacketHeader {
            stream_id: be(0..8),
            matrix: be(8..12) as u32,
            row: be(12..14) as u16,
            payload_bits: be(14..16) as u16,
        };
        let bits = header.payload_bits as usize;
        let end = HEADER_LEN + bits.div_ceil(8);
        if bytes.len() < end {
            return Err(PacketError::Truncated {
                needed: end,
                available: bytes.len(),
            });
        }
        if checksum(&bytes[..16], &bytes[HEADER_LEN..end]) != be(16..20) as u32 {
            return Err(PacketError::Checksum);
        }
        let payload = unpack_bits(&bytes[HEADER_LEN..end], bits);
        Ok((Packet { header, payload }, end))
    }
}

fn checksum(header: &[u8], payload: &[u8]) -> u32 {
    let mut h = crc32fast::Hasher::new();
    h.update(&header[..16]);
    h.update(payload);
    h.finalize()
}

fn pack_bits(bits: &BitVec) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for i in bits.iter_ones() {
        out[i / 8] |= 0x80 >> (i % 8);
    }
    out
}

fn unpack_bits(bytes: &[u8], len: usize) -> BitVec {
    BitVec::from_bools((0..len).map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0))
}

/// Concatenated wire form of `packets`.
pub fn write_packets(packets: &[Packet]) -> Vec<u8> {
    packets.iter().flat_map(Packet::to_bytes).collect()
}

/// Splits a concatenation of packets. Packets failing their checksum are
/// skipped using their claimed length; an unreadable tail is dropped. Both
/// are logged and counted in the second return value.
pub fn read_packets(mut bytes: &[u8]) -> (Vec<Packet>, usize) {
    let (mut packets, mut dropped) = (Vec::new(), 0);
    while !bytes.is_empty() {
        match Packet::parse(bytes) {
            Ok((p, used)) => {
                packets.push(p);
                bytes = &bytes[used..];
            }
            Err(PacketError::Checksum) => {
                let bits = u16::from_be_bytes([bytes[14], bytes[15]]) as usize;
                log::warn!("dropping packet with bad checksum");
                dropped += 1;
                bytes = &bytes[HEADER_LEN + bits.div_ceil(8)..];
            }
            Err(e) => {
                log::warn!("dropping unreadable tail of {} bytes: {e}", bytes.len());
                dropped += 1;
                break;
            }
        }
    }
    (packets, dropped)
}

/// Packet layout for one code and packet length.
#[derive(Debug, Clone)]
pub struct PacketMatrix {
    code: Code,
    packet_bits: usize,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    parity_equations: Vec<BitVec>,
}

impl PacketMatrix {
    pub fn new(code: &Code, packet_bits: usize) -> Result<Self, PacketError> {
        if packet_bits == 0 || packet_bits > u16::MAX as usize {
            return Err(PacketError::PacketBits(packet_bits));
        }
        if code.k() == 0 || code.n() > 1 << 16 {
            return Err(PacketError::UnusableCode {
                n: code.n(),
                k: code.k(),
            });
        }
        if !TYPICAL_PACKET_BITS.contains(&packet_bits) {
            log::warn!("packet length {packet_bits} bits is outside the typical 30..=1000");
        }
        let enc = code.systematic_encoder();
        Ok(PacketMatrix {
            code: code.clone(),
            packet_bits,
            info_positions: enc.info_positions().to_vec(),
            parity_positions: enc.parity_positions().to_vec(),
            parity_equations: enc.parity_equations().to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn packet_bits(&self) -> usize {
        self.packet_bits
    }

    /// Information bits per matrix, `k * packet_bits`.
    pub fn info_bits(&self) -> usize {
        self.k() * self.packet_bits
    }

    /// Rows holding information bits, in information order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Matrices needed for a stream of `len` bytes.
    pub fn matrices_for(&self, len: usize) -> usize {
        (len * 8 + TRAILER_BITS).div_ceil(self.info_bits())
    }

    /// Fills the parity rows of a matrix whose information rows are set.
    fn encode_rows(&self, rows: &mut [BitVec]) {
        for (eq, &p) in self.parity_equations.iter().zip(&self.parity_positions) {
            let mut acc = BitVec::zeros(self.packet_bits);
            for i in eq.iter_ones() {
                acc.xor_assign(&rows[self.info_positions[i]]);
            }
            rows[p] = acc;
        }
    }

    /// Encodes `data` into packets, matrix by matrix, rows in index order.
    pub fn encode(&self, data: &[u8], stream_id: u64) -> Vec<Packet> {
        let matrices = self.matrices_for(data.len());
        let total = matrices * self.info_bits();
        let mut stream = BitVec::zeros(total);
        for (i, &b) in data.iter().enumerate() {
            for k in 0..8 {
                if b & (0x80 >> k) != 0 {
                    stream.set(i * 8 + k, true);
                }
            }
        }
        let len = data.len() as u64;
        for k in 0..TRAILER_BITS {
            stream.set(total - TRAILER_BITS + k, len >> (63 - k) & 1 == 1);
        }
        let s = self.packet_bits;
        let mut packets = Vec::with_capacity(matrices * self.n());
        for m in 0..matrices {
            let base = m * self.info_bits();
            let mut rows = vec![BitVec::zeros(s); self.n()];
            for (i, &pos) in self.info_positions.iter().enumerate() {
                let off = base + i * s;
                rows[pos] = BitVec::from_bools((0..s).map(|c| stream.get(off + c)));
            }
            self.encode_rows(&mut rows);
            packets.extend(rows.into_iter().enumerate().map(|(r, payload)| Packet {
                header: PacketHeader {
                    stream_id,
                    matrix: m as u32,
                    row: r as u16,
                    payload_bits: s as u16,
                },
                payload,
            }));
        }
        packets
    }

    /// Decodes a received set of packets back into the byte stream.
    pub fn decode(
        &self,
        packets: &[Packet],
        decoder: Decoder,
    ) -> Result<DecodedStream, PacketError> {
        let mut stats = DecodeStats::default();
        let mut streams: Vec<u64> = packets.iter().map(|p| p.header.stream_id).collect();
        streams.sort_unstable();
        streams.dedup();
        if streams.len() > 1 {
            return Err(PacketError::MixedStreams(streams));
        }
        let mut matrices: BTreeMap<u32, HashMap<usize, &BitVec>> = BTreeMap::new();
        for p in packets {
            let h = &p.header;
            if h.row as usize >= self.n() || h.payload_bits as usize != self.packet_bits {
                log::warn!(
                    "ignoring packet (matrix {}, row {}, {} bits) that does not fit the layout",
                    h.matrix,
                    h.row,
                    h.payload_bits
                );
                stats.ignored += 1;
                continue;
            }
            if matrices
                .entry(h.matrix)
                .or_default()
                .insert(h.row as usize, &p.payload)
                .is_some()
            {
                log::warn!(
                    "duplicate packet for matrix {} row {}; keeping the last",
                    h.matrix,
                    h.row
                );
                stats.duplicates += 1;
            }
        }
        let Some((&last, _)) = matrices.last_key_value() else {
            return Err(PacketError::NoPackets);
        };
        let count = last as usize + 1;
        let results: Vec<Result<Vec<BitVec>, MatrixFailure>> = (0..count)
            .into_par_iter()
            .map(|m| {
                let empty = HashMap::new();
                let rows = matrices.get(&(m as u32)).unwrap_or(&empty);
                self.decode_matrix(m, rows, decoder)
            })
            .collect();
        let mut info = Vec::with_capacity(count);
        let mut failures = Vec::new();
        for r in results {
            match r {
                Ok(rows) => info.push(rows),
                Err(f) => failures.push(f),
            }
        }
        if !failures.is_empty() {
            return Err(PacketError::Undecodable {
                total: count,
                failures,
            });
        }
        stats.matrices = count;
        stats.received = matrices.values().map(HashMap::len).sum();
        let data = self.assemble(&info)?;
        Ok(DecodedStream { data, stats })
    }

    /// Information rows of matrix `m`, in information order.
    fn decode_matrix(
        &self,
        m: usize,
        rows: &HashMap<usize, &BitVec>,
        decoder: Decoder,
    ) -> Result<Vec<BitVec>, MatrixFailure> {
        let erased: Vec<usize> = (0..self.n()).filter(|r| !rows.contains_key(r)).collect();
        let fail = || MatrixFailure {
            matrix: m,
            received: rows.len(),
            erased: erased.len(),
            rank_deficit: erased.len() - self.code.h().select_columns(&erased).rank(),
        };
        let mut full: Vec<BitVec> = (0..self.n())
            .map(|r| {
                rows.get(&r)
                    .map_or_else(|| BitVec::zeros(self.packet_bits), |&p| p.clone())
            })
            .collect();
        if self.info_positions.iter().all(|p| rows.contains_key(p)) {
            return Ok(self
                .info_positions
                .iter()
                .map(|&p| full[p].clone())
                .collect());
        }
        if decoder == Decoder::InPlace {
            let schedule = InPlaceSchedule::plan(&self.code, &erased);
            if !schedule.is_complete() {
                return Err(fail());
            }
            let adj = self.code.row_adjacency();
            let rhs = schedule
                .equations()
                .iter()
                .map(|&e| {
                    let mut acc = BitVec::zeros(self.packet_bits);
                    for &c in &adj[e] {
                        if let Some(p) = rows.get(&(c as usize)) {
                            acc.xor_assign(p);
                        }
                    }
                    acc
                })
                .collect();
            for (&j, v) in erased.iter().zip(schedule.solve(rhs)) {
                full[j] = v;
            }
        } else {
            for c in 0..self.packet_bits {
                let column = BitVec::from_bools(full.iter().map(|r| r.get(c)));
                let rw = ReceivedWord::with_erasures(&column, &erased);
                let out = decoder
                    .decode(&self.code, &rw)
                    .expect("column length matches code");
                let word = out.word.ok_or_else(fail)?;
                for &j in &erased {
                    full[j].set(c, word.get(j));
                }
            }
        }
        Ok(self
            .info_positions
            .iter()
            .map(|&p| full[p].clone())
            .collect())
    }

    fn assemble(&self, info: &[Vec<BitVec>]) -> Result<Vec<u8>, PacketError> {
        let bits: Vec<bool> = info
            .iter()
            .flat_map(|rows| rows.iter().flat_map(|r| (0..r.len()).map(|c| r.get(c))))
            .collect();
        let total = bits.len();
        let len = bits[total - TRAILER_BITS..]
            .iter()
            .fold(0u64, |a, &b| a << 1 | b as u64);
        let capacity = (total - TRAILER_BITS) / 8;
        if len as usize > capacity || self.matrices_for(len as usize) != info.len() {
            return Err(PacketError::BadTrailer(format!(
                "length {len} does not fit {} matrices",
                info.len()
            )));
        }
        Ok((0..len as usize)
            .map(|i| (0..8).fold(0u8, |a, k| a << 1 | bits[i * 8 + k] as u8))
            .collect())
    }

    /// Packets received, in `order`, before the stream first decodes, or
    /// `None` if it never does.
    pub fn packets_needed(
        &self,
        packets: &[Packet],
        order: &[usize],
        decoder: Decoder,
    ) -> Option<usize> {
        let mut got: Vec<Packet> = Vec::with_capacity(order.len());
        for &i in order {
            got.push(packets[i].clone());
            if got.len() >= self.k() && self.decode(&got, decoder).is_ok() {
                return Some(got.len());
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFailure {
    pub matrix: usize,
    pub received: usize,
    pub erased: usize,
    /// Erased rows minus the rank of their columns in `H`.
    pub rank_deficit: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecodeStats {
    pub matrices: usize,
    pub received: usize,
    pub duplicates: usize,
    pub ignored: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedStream {
    pub data: Vec<u8>,
    pub stats: DecodeStats,
}

/// Transport losses to simulate.
#[derive(Debug, Clone, Default)]
pub struct LossConfig {
    /// Each packet is dropped independently with this probability.
    pub drop_prob: f64,
    /// Row indices dropped from every matrix.
    pub drop_rows: Vec<u16>,
    pub seed: u64,
}

/// Removes packets according to `cfg`; one uniform draw per packet, in order.
pub fn inject_loss(packets: &[Packet], cfg: &LossConfig) -> Vec<Packet> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    packets
        .iter()
        .filter(|p| {
            let lost = rng.gen::<f64>() < cfg.drop_prob;
            !lost && !cfg.drop_rows.contains(&p.header.row)
        })
        .cloned()
        .collect()
}
