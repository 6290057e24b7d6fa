use num_integer::Integer;

/// Cycles of a permutation, each starting at its smallest element, sorted.
pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = p[x];
        }
        out.push(c);
    }
    out
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub fn order(p: &[usize]) -> u64 {
    cycles(p).iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
}

pub fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

pub fn power(p: &[usize], k: u64) -> Vec<usize> {
    let mut out: Vec<usize> = (0..p.len()).collect();
    for c in cycles(p) {
        let l = c.len();
        let s = (k % l as u64) as usize;
        for (i, &x) in c.iter().enumerate() {
            out[x] = c[(i + s) % l];
        }
    }
    out
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_lcm() {
        let p = vec![1, 2, 0, 4, 3, 5];
        assert_eq!(order(&p), 6);
        assert!(is_identity(&power(&p, 6)));
        assert_eq!(cycles(&p), vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
    }
}
