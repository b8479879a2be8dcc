//! Decoding of isomorphism signatures for 3-manifold triangulations.
//!
//! Layout: simplex count, a packed stream of per-facet actions (three 2-bit
//! fields per character), destination simplices for the "join" actions, then one
//! permutation index per join.

use crate::error::Error;
use crate::perm::Perm4;

fn sval(c: u8) -> Option<u32> {
    match c {
        b'a'..=b'z' => Some((c - b'a') as u32),
        b'A'..=b'Z' => Some((c - b'A') as u32 + 26),
        b'0'..=b'9' => Some((c - b'0') as u32 + 52),
        b'+' => Some(62),
        b'-' => Some(63),
        _ => None,
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn next(&mut self) -> Result<u32, Error> {
        let c = *self
            .bytes
            .get(self.pos)
            .ok_or_else(|| Error::Signature("signature truncated".into()))?;
        self.pos += 1;
        sval(c).ok_or_else(|| Error::Signature(format!("unknown character {:?}", c as char)))
    }

    fn multi(&mut self, n_chars: usize) -> Result<usize, Error> {
        let mut ans = 0usize;
        for i in 0..n_chars {
            ans |= (self.next()? as usize) << (6 * i);
        }
        Ok(ans)
    }
}

/// Raw gluing data: for each tetrahedron and face, the adjacent tetrahedron
/// and the vertex map into it.
pub type RawGluings = Vec<[(usize, Perm4); 4]>;

/// Decodes a connected, closed-up (no boundary faces) isomorphism signature.
pub fn decode_isosig(sig: &str) -> Result<RawGluings, Error> {
    let mut r = Reader { bytes: sig.as_bytes(), pos: 0 };
    let mut n_simp = r.next()? as usize;
    let mut n_chars = 1;
    if n_simp == 63 {
        n_chars = r.next()? as usize;
        n_simp = r.multi(n_chars)?;
    }
    if n_simp == 0 {
        return Err(Error::Signature("empty triangulation".into()));
    }
    let n_facets = 4 * n_simp;

    let mut actions = Vec::new();
    let mut facet_pos = 0;
    let mut n_joins = 0;
    while facet_pos < n_facets {
        let mut v = r.next()?;
        for _ in 0..3 {
            if facet_pos >= n_facets {
                break;
            }
            let trit = v & 3;
            v >>= 2;
            actions.push(trit);
            match trit {
                0 => facet_pos += 1,
                1 => facet_pos += 2,
                2 => {
                    facet_pos += 2;
                    n_joins += 1;
                }
                _ => return Err(Error::Signature("invalid facet action".into())),
            }
        }
    }
    if facet_pos != n_facets {
        return Err(Error::Signature("facet actions overrun".into()));
    }
    let mut dest = Vec::with_capacity(n_joins);
    for _ in 0..n_joins {
        let d = r.multi(n_chars)?;
        if d >= n_simp {
            return Err(Error::Signature(format!("join destination {d} out of range")));
        }
        dest.push(d);
    }
    let mut perms = Vec::with_capacity(n_joins);
    for _ in 0..n_joins {
        let g = r.next()? as usize;
        if g >= 24 {
            return Err(Error::Signature(format!("permutation index {g} out of range")));
        }
        perms.push(Perm4::ordered_s4(g));
    }
    if r.pos != r.bytes.len() {
        return Err(Error::Signature("trailing characters after signature".into()));
    }

    let mut adj: Vec<[Option<(usize, Perm4)>; 4]> = vec![[None; 4]; n_simp];
    let mut action_iter = actions.into_iter();
    let mut next_unused = 1;
    let mut join = 0;
    for s in 0..n_simp {
        for f in 0..4u8 {
            if adj[s][f as usize].is_some() {
                continue;
            }
            let a = action_iter
                .next()
                .ok_or_else(|| Error::Signature("ran out of facet actions".into()))?;
            let (t, p) = match a {
                0 => return Err(Error::Signature("signature has boundary faces".into())),
                1 => {
                    if next_unused >= n_simp {
                        return Err(Error::Signature("too many new simplices".into()));
                    }
                    next_unused += 1;
                    (next_unused - 1, Perm4::IDENTITY)
                }
                _ => {
                    let t = dest[join];
                    let p = perms[join];
                    join += 1;
                    (t, p)
                }
            };
            let g = p.apply(f) as usize;
            if adj[t][g].is_some() || (t == s && g == f as usize) {
                return Err(Error::Signature("gluing targets an occupied face".into()));
            }
            adj[s][f as usize] = Some((t, p));
            adj[t][g] = Some((s, p.inverse()));
        }
    }
    adj.into_iter()
        .map(|faces| {
            let mut out = [(0, Perm4::IDENTITY); 4];
            for (i, f) in faces.into_iter().enumerate() {
                out[i] = f.ok_or_else(|| Error::Signature("unglued face".into()))?;
            }
            Ok(out)
        })
        .collect()
}
