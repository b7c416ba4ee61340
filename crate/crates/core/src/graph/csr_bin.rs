//! Binary CSR files.
//!
//! Layout (little-endian):
//!
//! ```text
//! u64 version            1 (u32 destinations) or 2 (u64 destinations)
//! u64 edge_data_size     0 or 4
//! u64 num_nodes
//! u64 num_edges
//! u64 end_offsets[num_nodes]   end of node i's list; node 0 starts at 0
//! u32 dests[num_edges]         (u64 in version 2)
//! zero padding to an 8-byte boundary
//! u32 weights[num_edges]       only when edge_data_size == 4
//! ```
//!
//! Version 1 is written whenever `num_nodes < 2^32`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{Csr, Graph};
use crate::error::{Error, Result};

pub const CSR_BIN_VERSION: u64 = 1;
const CSR_BIN_VERSION_WIDE: u64 = 2;
pub const CSR_BIN_HEADER_BYTES: u64 = 32;

pub fn write_csr_bin(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let csr = graph.out();
    let wide = csr.num_nodes() > u32::MAX as u64;
    let mut out = BufWriter::new(File::create(path)?);
    let version = if wide { CSR_BIN_VERSION_WIDE } else { CSR_BIN_VERSION };
    let edge_data_size: u64 = if csr.weights().is_some() { 4 } else { 0 };
    for field in [version, edge_data_size, csr.num_nodes(), csr.num_edges()] {
        out.write_all(&field.to_le_bytes())?;
    }
    for &end in &csr.offsets()[1..] {
        out.write_all(&end.to_le_bytes())?;
    }
    if wide {
        for &d in csr.dests() {
            out.write_all(&d.to_le_bytes())?;
        }
    } else {
        for &d in csr.dests() {
            out.write_all(&(d as u32).to_le_bytes())?;
        }
        if csr.num_edges() % 2 == 1 {
            out.write_all(&[0u8; 4])?;
        }
    }
    if let Some(weights) = csr.weights() {
        for &w in weights {
            out.write_all(&w.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl Reader<'_> {
    fn section(&self, section: &'static str, offset: u64, len: Option<u64>) -> Result<&[u8]> {
        let available = (self.bytes.len() as u64).saturating_sub(offset);
        let needed = len.ok_or(Error::MalformedHeader {
            offset: 24,
            reason: format!("{section} size overflows"),
        })?;
        if needed > available {
            return Err(Error::Truncated {
                section,
                offset,
                needed,
                available,
            });
        }
        Ok(&self.bytes[offset as usize..(offset + needed) as usize])
    }
}

fn le_u64(chunk: &[u8]) -> u64 {
    u64::from_le_bytes(chunk.try_into().unwrap())
}

fn le_u32(chunk: &[u8]) -> u32 {
    u32::from_le_bytes(chunk.try_into().unwrap())
}

pub fn load_csr_bin(path: impl AsRef<Path>) -> Result<Graph> {
    let bytes = std::fs::read(path)?;
    parse_csr_bin(&bytes)
}

pub(crate) fn parse_csr_bin(bytes: &[u8]) -> Result<Graph> {
    let reader = Reader { bytes };
    let header = reader.section("header", 0, Some(CSR_BIN_HEADER_BYTES))?;
    let version = le_u64(&header[0..8]);
    let edge_data_size = le_u64(&header[8..16]);
    let num_nodes = le_u64(&header[16..24]);
    let num_edges = le_u64(&header[24..32]);
    let dest_width = match version {
        CSR_BIN_VERSION => 4u64,
        CSR_BIN_VERSION_WIDE => 8,
        other => {
            return Err(Error::MalformedHeader {
                offset: 0,
                reason: format!("unsupported version {other}"),
            })
        }
    };
    if edge_data_size != 0 && edge_data_size != 4 {
        return Err(Error::MalformedHeader {
            offset: 8,
            reason: format!("edge data size {edge_data_size}, expected 0 or 4"),
        });
    }
    if version == CSR_BIN_VERSION && num_nodes > u32::MAX as u64 + 1 {
        return Err(Error::MalformedHeader {
            offset: 16,
            reason: format!("{num_nodes} nodes do not fit 32-bit destinations"),
        });
    }

    let offsets_at = CSR_BIN_HEADER_BYTES;
    let offsets_raw = reader.section("offsets", offsets_at, num_nodes.checked_mul(8))?;
    let mut offsets = Vec::with_capacity(num_nodes as usize + 1);
    offsets.push(0u64);
    for (i, chunk) in offsets_raw.chunks_exact(8).enumerate() {
        let end = le_u64(chunk);
        let prev = *offsets.last().unwrap();
        if end < prev || end > num_edges {
            return Err(Error::InvalidCsr(format!(
                "offset {end} at byte {} is outside [{prev}, {num_edges}]",
                offsets_at + 8 * i as u64
            )));
        }
        offsets.push(end);
    }
    if *offsets.last().unwrap() != num_edges {
        return Err(Error::InvalidCsr(format!(
            "offsets end at {} but header declares {num_edges} edges",
            offsets.last().unwrap()
        )));
    }

    let dests_at = offsets_at + num_nodes * 8;
    let dests_raw = reader.section("destinations", dests_at, num_edges.checked_mul(dest_width))?;
    let mut dests = Vec::with_capacity(num_edges as usize);
    for (i, chunk) in dests_raw.chunks_exact(dest_width as usize).enumerate() {
        let dest = if dest_width == 4 { le_u32(chunk) as u64 } else { le_u64(chunk) };
        if dest >= num_nodes {
            return Err(Error::DestinationOutOfRange {
                offset: dests_at + dest_width * i as u64,
                dest,
                num_nodes,
            });
        }
        dests.push(dest);
    }

    let weights = if edge_data_size == 4 {
        let dests_end = dests_at + num_edges * dest_width;
        let weights_at = dests_end.next_multiple_of(8);
        let raw = reader.section("weights", weights_at, num_edges.checked_mul(4))?;
        Some(raw.chunks_exact(4).map(le_u32).collect())
    } else {
        None
    };

    Csr::new(offsets, dests, weights).map(Graph::from_csr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_rmat, RmatParams};

    fn encode(graph: &Graph) -> Vec<u8> {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.bin");
        write_csr_bin(graph, &path).unwrap();
        std::fs::read(path).unwrap()
    }

    fn header(version: u64, eds: u64, nodes: u64, edges: u64) -> Vec<u8> {
        [version, eds, nodes, edges].iter().flat_map(|f| f.to_le_bytes()).collect()
    }

    #[test]
    fn empty_graph_is_header_only() {
        let bytes = encode(&Graph::empty());
        assert_eq!(bytes.len(), 32);
        assert_eq!(bytes, header(1, 0, 0, 0));
        assert_eq!(parse_csr_bin(&bytes).unwrap(), Graph::empty());
    }

    #[test]
    fn single_edge_layout() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let bytes = encode(&g);
        // header + 2 end offsets + one u32 dest + 4 bytes of padding
        assert_eq!(bytes.len(), 32 + 16 + 4 + 4);
        let mut expected = header(1, 0, 2, 1);
        expected.extend(1u64.to_le_bytes());
        expected.extend(1u64.to_le_bytes());
        expected.extend(1u32.to_le_bytes());
        expected.extend([0u8; 4]);
        assert_eq!(bytes, expected);
        let back = parse_csr_bin(&bytes).unwrap();
        assert_eq!(back.out_neighbors(0), &[1]);
        assert_eq!(back.num_edges(), 1);
    }

    #[test]
    fn weighted_single_edge_size() {
        let g = Graph::from_weighted_edges(2, &[(0, 1, 5)]).unwrap();
        let bytes = encode(&g);
        assert_eq!(bytes.len(), 32 + 16 + 8 + 4);
        assert_eq!(parse_csr_bin(&bytes).unwrap(), g);
    }

    #[test]
    fn destination_out_of_range_reports_offset() {
        let mut bytes = header(1, 0, 5, 1);
        bytes.extend([1u64, 1, 1, 1, 1].iter().flat_map(|o| o.to_le_bytes()));
        bytes.extend(7u32.to_le_bytes());
        match parse_csr_bin(&bytes) {
            Err(Error::DestinationOutOfRange { offset, dest, num_nodes }) => {
                assert_eq!((offset, dest, num_nodes), (72, 7, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_headers() {
        assert!(matches!(
            parse_csr_bin(&header(9, 0, 0, 0)),
            Err(Error::MalformedHeader { offset: 0, .. })
        ));
        assert!(matches!(
            parse_csr_bin(&header(1, 8, 0, 0)),
            Err(Error::MalformedHeader { offset: 8, .. })
        ));
        assert!(matches!(
            parse_csr_bin(&[0u8; 10]),
            Err(Error::Truncated { section: "header", offset: 0, .. })
        ));
    }

    #[test]
    fn truncated_arrays() {
        let g = Graph::from_weighted_edges(3, &[(0, 1, 2), (1, 2, 3), (2, 0, 4)]).unwrap();
        let bytes = encode(&g);
        for cut in [40, 60, bytes.len() - 1] {
            assert!(
                matches!(parse_csr_bin(&bytes[..cut]), Err(Error::Truncated { .. })),
                "cut at {cut}"
            );
        }
    }

    #[test]
    fn rmat_round_trip() {
        let params = RmatParams::graph500(8, 8, 3);
        let g = generate_rmat(&params).unwrap().assign_random_weights(4, 255).unwrap();
        assert_eq!(parse_csr_bin(&encode(&g)).unwrap(), g);
    }
}
