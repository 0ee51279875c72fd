//! Index files.
//!
//! Layout, little-endian:
//!
//! ```text
//! magic        b"SRIX"
//! version      u16   (currently 1)
//! kind         u8    1 successor, 2 three-sided, 3 optimal-2d, 4 text
//! config_len   u32
//! config       bincode BuildConfig
//! body         kind-specific
//! ```
//!
//! A successor body is the compact tree in its own binary layout (see
//! [`CompactRangeTree::write_to`]) followed by the bincode-encoded
//! range-extremum tables and rank-space map. All other bodies are bincode.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use bincode::Options;
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::RankSpaceMap;
use crate::optimal::Optimal2DIndex;
use crate::range_tree::CompactRangeTree;
use crate::succinct::RmqIndex;
use crate::successor::SuccessorIndex;
use crate::text::TextIndex;
use crate::three_sided::ThreeSidedIndex;

const MAGIC: &[u8; 4] = b"SRIX";
pub const FORMAT_VERSION: u16 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexKind {
    Successor,
    ThreeSided,
    Optimal2D,
    Text,
}

impl IndexKind {
    fn code(self) -> u8 {
        match self {
            IndexKind::Successor => 1,
            IndexKind::ThreeSided => 2,
            IndexKind::Optimal2D => 3,
            IndexKind::Text => 4,
        }
    }

    fn from_code(c: u8) -> Result<Self> {
        Ok(match c {
            1 => IndexKind::Successor,
            2 => IndexKind::ThreeSided,
            3 => IndexKind::Optimal2D,
            4 => IndexKind::Text,
            _ => return Err(Error::Format(format!("unknown index kind {c}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Successor => "successor",
            IndexKind::ThreeSided => "three-sided",
            IndexKind::Optimal2D => "optimal-2d",
            IndexKind::Text => "text",
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [IndexKind::Successor, IndexKind::ThreeSided, IndexKind::Optimal2D, IndexKind::Text]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown structure variant {s:?}")))
    }
}

/// Settings an index was built with, stored in its file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub stride: u32,
    pub group_size: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyIndex {
    Successor(SuccessorIndex),
    ThreeSided(ThreeSidedIndex),
    Optimal2D(Optimal2DIndex),
    Text(TextIndex),
}

impl AnyIndex {
    pub fn kind(&self) -> IndexKind {
        match self {
            AnyIndex::Successor(_) => IndexKind::Successor,
            AnyIndex::ThreeSided(_) => IndexKind::ThreeSided,
            AnyIndex::Optimal2D(_) => IndexKind::Optimal2D,
            AnyIndex::Text(_) => IndexKind::Text,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyIndex::Successor(i) => i.len(),
            AnyIndex::ThreeSided(i) => i.len(),
            AnyIndex::Optimal2D(i) => i.len(),
            AnyIndex::Text(i) => i.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn size_in_bytes(&self) -> usize {
        match self {
            AnyIndex::Successor(i) => i.size_in_bytes(),
            AnyIndex::ThreeSided(i) => i.size_in_bytes(),
            AnyIndex::Optimal2D(i) => i.size_in_bytes(),
            AnyIndex::Text(i) => i.size_in_bytes(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexFile {
    pub config: BuildConfig,
    pub index: AnyIndex,
}

fn codec() -> impl Options {
    bincode::DefaultOptions::new().with_fixint_encoding().allow_trailing_bytes()
}

fn encode<W: Write, T: Serialize>(w: &mut W, value: &T) -> Result<()> {
    codec().serialize_into(w, value).map_err(|e| Error::Format(e.to_string()))
}

fn decode<R: Read, T: DeserializeOwned>(r: &mut R) -> Result<T> {
    codec().deserialize_from(r).map_err(|e| match *e {
        bincode::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(other.to_string()),
    })
}

impl IndexFile {
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_u16::<LittleEndian>(FORMAT_VERSION)?;
        w.write_u8(self.index.kind().code())?;
        let config = codec().serialize(&self.config).map_err(|e| Error::Format(e.to_string()))?;
        w.write_u32::<LittleEndian>(config.len() as u32)?;
        w.write_all(&config)?;
        match &self.index {
            AnyIndex::Successor(i) => {
                i.tree().write_to(w)?;
                encode(w, &(i.rmq_tables(), i.map()))
            }
            AnyIndex::ThreeSided(i) => encode(w, i),
            AnyIndex::Optimal2D(i) => encode(w, i),
            AnyIndex::Text(i) => encode(w, i),
        }
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not an index file".into()));
        }
        let version = r.read_u16::<LittleEndian>()?;
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "index format version {version}, this build reads {FORMAT_VERSION}"
            )));
        }
        let kind = IndexKind::from_code(r.read_u8()?)?;
        let len = r.read_u32::<LittleEndian>()? as usize;
        let mut config = vec![0u8; len];
        r.read_exact(&mut config)?;
        let config: BuildConfig =
            codec().deserialize(&config).map_err(|e| Error::Format(e.to_string()))?;
        let index = match kind {
            IndexKind::Successor => {
                let tree = CompactRangeTree::read_from(r)?;
                let (rmq, map): (Vec<Vec<RmqIndex>>, RankSpaceMap) = decode(r)?;
                if rmq.len() != tree.depth() as usize || map.len() != tree.len() {
                    return Err(Error::Format("successor tables do not match the tree".into()));
                }
                AnyIndex::Successor(SuccessorIndex::from_parts(tree, rmq, map))
            }
            IndexKind::ThreeSided => AnyIndex::ThreeSided(decode(r)?),
            IndexKind::Optimal2D => AnyIndex::Optimal2D(decode(r)?),
            IndexKind::Text => AnyIndex::Text(decode(r)?),
        };
        Ok(IndexFile { config, index })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(&mut BufReader::new(File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::QueryRect;
    use crate::range_tree::tests::random_rank_points;

    fn round_trip(index: AnyIndex) -> IndexFile {
        let file = IndexFile { config: BuildConfig { stride: 2, group_size: Some(7) }, index };
        let mut buf = Vec::new();
        file.write_to(&mut buf).unwrap();
        let back = IndexFile::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back, file);
        back
    }

    #[test]
    fn every_kind_round_trips() {
        let pts = random_rank_points(300, 1);
        let s = SuccessorIndex::build(&pts, 2).unwrap();
        let q = QueryRect::closed(10, 200, 30, 250);
        let before: Vec<_> = s.sorted_iter(&q).collect();
        let AnyIndex::Successor(back) = round_trip(AnyIndex::Successor(s)).index else { panic!() };
        assert_eq!(back.sorted_iter(&q).collect::<Vec<_>>(), before);
        round_trip(AnyIndex::ThreeSided(ThreeSidedIndex::build(&pts).unwrap()));
        round_trip(AnyIndex::Optimal2D(Optimal2DIndex::build(&pts).unwrap()));
        round_trip(AnyIndex::Text(TextIndex::build(b"abracadabra").unwrap()));
    }

    #[test]
    fn rejects_bad_headers() {
        let file = IndexFile {
            config: BuildConfig { stride: 1, group_size: None },
            index: AnyIndex::Text(TextIndex::build(b"ab").unwrap()),
        };
        let mut buf = Vec::new();
        file.write_to(&mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(IndexFile::read_from(&mut bad.as_slice()), Err(Error::Format(_))));
        let mut newer = buf.clone();
        newer[4] = 9;
        assert!(matches!(IndexFile::read_from(&mut newer.as_slice()), Err(Error::Format(_))));
        let mut kind = buf.clone();
        kind[6] = 42;
        assert!(matches!(IndexFile::read_from(&mut kind.as_slice()), Err(Error::Format(_))));
        let truncated = &buf[..buf.len() - 3];
        assert!(IndexFile::read_from(&mut &truncated[..]).is_err());
    }

    #[test]
    fn kind_names() {
        assert_eq!("optimal-2d".parse::<IndexKind>().unwrap(), IndexKind::Optimal2D);
        assert!("wavelet".parse::<IndexKind>().is_err());
    }
}
