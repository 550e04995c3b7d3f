use super::{boxplus, softplus};
use crate::bits::BitVector;
use crate::codes::PolarCodeConfig;
use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SclConfig {
    pub list_size: usize,
}

impl SclConfig {
    pub fn new(list_size: usize) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::InvalidParameter("list size must be at least 1".into()));
        }
        Ok(Self { list_size })
    }

    /// `L = 2^K`, the list size at which no path is ever pruned.
    pub fn exhaustive(cfg: &PolarCodeConfig) -> Self {
        Self {
            list_size: 1usize << cfg.k().min(usize::BITS as usize - 2),
        }
    }
}

#[derive(Debug, Clone)]
struct Path {
    u: Vec<u8>,
    metric: f64,
}

/// One step of list expansion at leaf `i`. Returns, per surviving path, the
/// decided bit and the index of the path it descends from.
fn leaf(
    paths: &mut Vec<Path>,
    llr: &[f64],
    frozen: bool,
    list_size: usize,
) -> (Vec<u8>, Vec<usize>) {
    if frozen {
        for (p, &l) in paths.iter_mut().zip(llr) {
            p.metric += softplus(-l);
            p.u.push(0);
        }
        return (vec![0; paths.len()], (0..paths.len()).collect());
    }
    let mut cand: Vec<(f64, usize, u8)> = Vec::with_capacity(2 * paths.len());
    for (i, (p, &l)) in paths.iter().zip(llr).enumerate() {
        cand.push((p.metric + softplus(-l), i, 0));
        cand.push((p.metric + softplus(l), i, 1));
    }
    cand.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| paths[a.1].u.cmp(&paths[b.1].u))
            .then(a.2.cmp(&b.2))
    });
    cand.truncate(list_size);
    let mut next = Vec::with_capacity(cand.len());
    let mut bits = Vec::with_capacity(cand.len());
    let mut lineage = Vec::with_capacity(cand.len());
    for (m, i, b) in cand {
        let mut u = paths[i].u.clone();
        u.push(b);
        next.push(Path { u, metric: m });
        bits.push(b);
        lineage.push(i);
    }
    *paths = next;
    (bits, lineage)
}

/// Decodes the node spanning input positions `offset..offset+len`.
/// `alpha[p]` holds the node's LLRs for path `p`. Returns each surviving
/// path's re-encoded node bits and its ancestor among the incoming paths.
fn node(
    cfg: &PolarCodeConfig,
    paths: &mut Vec<Path>,
    alpha: &[Vec<f64>],
    offset: usize,
    list_size: usize,
) -> (Vec<Vec<u8>>, Vec<usize>) {
    let len = alpha[0].len();
    if len == 1 {
        let llr: Vec<f64> = alpha.iter().map(|a| a[0]).collect();
        let (bits, lineage) = leaf(paths, &llr, cfg.is_frozen(offset), list_size);
        return (bits.into_iter().map(|b| vec![b]).collect(), lineage);
    }
    let half = len / 2;
    let left: Vec<Vec<f64>> = alpha
        .iter()
        .map(|a| (0..half).map(|j| boxplus(a[j], a[j + half])).collect())
        .collect();
    let (beta_l, lin1) = node(cfg, paths, &left, offset, list_size);
    let right: Vec<Vec<f64>> = lin1
        .iter()
        .zip(&beta_l)
        .map(|(&p, bl)| {
            let a = &alpha[p];
            (0..half)
                .map(|j| a[j + half] + if bl[j] == 0 { a[j] } else { -a[j] })
                .collect()
        })
        .collect();
    let (beta_r, lin2) = node(cfg, paths, &right, offset + half, list_size);
    let beta = lin2
        .iter()
        .zip(&beta_r)
        .map(|(&q, br)| {
            let bl = &beta_l[q];
            let mut out: Vec<u8> = bl.iter().zip(br).map(|(a, b)| a ^ b).collect();
            out.extend_from_slice(br);
            out
        })
        .collect();
    let lineage = lin2.iter().map(|&q| lin1[q]).collect();
    (beta, lineage)
}

/// Successive-cancellation list decoding.
///
/// Left children receive `f(a, b)` ([`boxplus`](super::boxplus)), right
/// children `g(a, b, u) = b + (1 − 2u)·a`. Each decided bit `u` with leaf LLR
/// `L` adds `ln(1 + e^{−(1−2u)L})` to its path metric, which makes the metric
/// the negative log-posterior of the decided prefix. The `L` lowest metrics
/// survive each split; ties go to the lexicographically smaller prefix.
/// Returns the data bits of the best final path.
pub fn scl_decode(cfg: &PolarCodeConfig, llrs: &[f64], scl: &SclConfig) -> Result<BitVector> {
    check_len(cfg.n(), llrs.len())?;
    if scl.list_size == 0 {
        return Err(Error::InvalidParameter("list size must be at least 1".into()));
    }
    let mut paths = vec![Path {
        u: Vec::with_capacity(cfg.n()),
        metric: 0.0,
    }];
    node(cfg, &mut paths, &[llrs.to_vec()], 0, scl.list_size);
    let best = paths
        .iter()
        .min_by(|a, b| a.metric.total_cmp(&b.metric).then_with(|| a.u.cmp(&b.u)))
        .expect("at least one path survives");
    cfg.extract_data(&best.u)
}
