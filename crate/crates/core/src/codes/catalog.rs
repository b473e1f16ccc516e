//! Named codes used throughout the experiments.
//!
//! Cyclic LDPC supports ship as spec files under `data/`; a test
//! regenerates each one with [`cyclic_ldpc_support`](super::cyclic_ldpc_support)
//! and checks the rank, so nothing here is an unverified bit pattern.

use super::spec_file::CodeSpecFile;
use super::{Code, CodeError};
use crate::gf2::BitMatrix;

pub const LDPC_255_SPEC: &str = include_str!("../../data/ldpc255.code");
pub const LDPC_341_SPEC: &str = include_str!("../../data/ldpc341.code");

struct Entry {
    name: &'static str,
    aliases: &'static [&'static str],
    spec: &'static str,
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "rep3",
        aliases: &["3,1"],
        spec: "name = rep3\nfamily = cyclic\nn = 3\nk = 1\nsupport = 0 1\ndmin = 3\n",
    },
    Entry {
        name: "bch15",
        aliases: &["15,7"],
        spec: "name = bch15\nfamily = bch\nn = 15\nk = 7\ndesign_distance = 5\ndmin = 5\n",
    },
    Entry {
        name: "qr17",
        aliases: &["17,9"],
        spec: "name = qr17\nfamily = qr\nn = 17\nk = 9\ndmin = 5\n",
    },
    Entry {
        name: "golay23",
        aliases: &["23,12"],
        spec: "name = golay23\nfamily = qr\nn = 23\nk = 12\ndmin = 7\n",
    },
    Entry {
        name: "bch31",
        aliases: &["31,16"],
        spec: "name = bch31\nfamily = bch\nn = 31\nk = 16\ndesign_distance = 7\ndmin = 7\n",
    },
    Entry {
        name: "bch63",
        aliases: &["63,45"],
        spec: "name = bch63\nfamily = bch\nn = 63\nk = 45\ndesign_distance = 7\ndmin = 7\n",
    },
    Entry {
        name: "ldpc255",
        aliases: &["255,175"],
        spec: LDPC_255_SPEC,
    },
    Entry {
        name: "ldpc341",
        aliases: &["341,205"],
        spec: LDPC_341_SPEC,
    },
    Entry {
        name: "bch255",
        aliases: &["255,178"],
        spec: "name = bch255\nfamily = bch\nn = 255\nk = 178\ndesign_distance = 21\neven_subcode = true\ndmin = 22\n",
    },
    Entry {
        name: "bch127",
        aliases: &["127,64"],
        spec: "name = bch127\nfamily = bch\nn = 127\nk = 64\ndesign_distance = 21\ndmin = 21\n",
    },
    Entry {
        name: "ebch128",
        aliases: &["128,64"],
        spec: "name = ebch128\nfamily = bch\nn = 127\nk = 64\ndesign_distance = 21\nextend = true\ndmin = 22\n",
    },
    Entry {
        name: "qr103",
        aliases: &["103,52"],
        spec: "name = qr103\nfamily = qr\nn = 103\nk = 52\ndmin = 19\n",
    },
    Entry {
        name: "ldpc256",
        aliases: &["256,128"],
        spec: "name = ldpc256\nfamily = random-ldpc\nn = 256\nrows = 128\ncol_fractions = 2:0.4 3:0.4 6:0.2\nseed = 1\n",
    },
];

/// Catalog names with their `n,k` aliases.
pub fn names() -> Vec<(&'static str, &'static [&'static str])> {
    let mut out = vec![("hamming7", &["7,4"][..])];
    out.extend(ENTRIES.iter().map(|e| (e.name, e.aliases)));
    out
}

/// The Hamming (7,4) code with rows {1,3,5,7}, {2,3,6,7}, {4,5,6,7}
/// (1-based columns).
pub fn hamming7() -> Code {
    Code::new(
        "hamming7",
        BitMatrix::from_dense(&[
            [1u8, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ]),
        Some(3),
    )
}

/// Looks up a code by catalog name or by `n,k` (parentheses optional).
pub fn by_name(name: &str) -> Result<Code, CodeError> {
    let key: String = name
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
        .collect::<String>()
        .to_ascii_lowercase();
    if key == "hamming7" || key == "7,4" {
        return Ok(hamming7());
    }
    let entry = ENTRIES
        .iter()
        .find(|e| e.name == key || e.aliases.contains(&key.as_str()))
        .ok_or_else(|| CodeError::UnknownCode(name.to_string()))?;
    CodeSpecFile::parse(entry.spec, entry.name)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_by_alias() {
        assert_eq!(by_name("(15,7)").unwrap().k(), 7);
        assert_eq!(by_name("Hamming7").unwrap().n(), 7);
        assert!(by_name("nope").is_err());
    }
}
