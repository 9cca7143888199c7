use std::collections::HashMap;

/// Misra–Gries edge coloring of a simple graph on `nodes` vertices. Uses
/// at most `max_degree + 1` colors; returns one color per link.
pub fn misra_gries_edge_coloring(nodes: usize, links: &[(usize, usize)]) -> Vec<usize> {
    let mut degree = vec![0usize; nodes];
    for &(a, b) in links {
        assert!(a != b, "self-loop");
        degree[a] += 1;
        degree[b] += 1;
    }
    let k = degree.iter().copied().max().unwrap_or(0) + 1;
    let mut g = Coloring {
        links,
        color: vec![None; links.len()],
        at: vec![vec![None; k]; nodes],
        between: links.iter().enumerate().map(|(i, &(a, b))| ((a.min(b), a.max(b)), i)).collect(),
    };
    assert_eq!(g.between.len(), links.len(), "parallel links");
    for e in 0..links.len() {
        g.color_link(e);
    }
    g.color.into_iter().map(|c| c.expect("every link colored")).collect()
}

struct Coloring<'a> {
    links: &'a [(usize, usize)],
    color: Vec<Option<usize>>,
    /// `at[x][c]`: the link at `x` with color `c`.
    at: Vec<Vec<Option<usize>>>,
    between: HashMap<(usize, usize), usize>,
}

impl Coloring<'_> {
    fn other(&self, e: usize, x: usize) -> usize {
        let (a, b) = self.links[e];
        if a == x {
            b
        } else {
            a
        }
    }

    fn link(&self, x: usize, y: usize) -> usize {
        self.between[&(x.min(y), x.max(y))]
    }

    fn free(&self, x: usize, c: usize) -> bool {
        self.at[x][c].is_none()
    }

    fn first_free(&self, x: usize) -> usize {
        (0..self.at[x].len()).find(|&c| self.free(x, c)).expect("a free color")
    }

    fn set(&mut self, e: usize, c: Option<usize>) {
        let (a, b) = self.links[e];
        if let Some(old) = self.color[e] {
            self.at[a][old] = None;
            self.at[b][old] = None;
        }
        if let Some(c) = c {
            self.at[a][c] = Some(e);
            self.at[b][c] = Some(e);
        }
        self.color[e] = c;
    }

    fn color_link(&mut self, e: usize) {
        let (u, v) = self.links[e];
        if let Some(c) = (0..self.at[u].len()).find(|&c| self.free(u, c) && self.free(v, c)) {
            self.set(e, Some(c));
            return;
        }
        // maximal fan at u starting with v
        let mut fan = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let next = (0..self.at[u].len())
                .filter(|&c| self.free(last, c))
                .filter_map(|c| self.at[u][c])
                .map(|f| self.other(f, u))
                .find(|w| !fan.contains(w));
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = self.first_free(u);
        let d = self.first_free(*fan.last().unwrap());
        // invert the path from u alternating d and c
        if c != d {
            let mut path = Vec::new();
            let (mut x, mut col) = (u, d);
            while let Some(f) = self.at[x][col] {
                path.push(f);
                x = self.other(f, x);
                col = if col == c { d } else { c };
            }
            let swapped: Vec<(usize, usize)> =
                path.iter().map(|&f| (f, if self.color[f] == Some(c) { d } else { c })).collect();
            for &(f, _) in &swapped {
                self.set(f, None);
            }
            for (f, col) in swapped {
                self.set(f, Some(col));
            }
        }
        // the first fan vertex with d free, the prefix still being a fan
        let mut w = None;
        for i in 0..fan.len() {
            if i > 0 {
                let prev_link = self.link(u, fan[i]);
                match self.color[prev_link] {
                    Some(col) if self.free(fan[i - 1], col) => {}
                    _ => break,
                }
            }
            if self.free(fan[i], d) {
                w = Some(i);
                break;
            }
        }
        let w = w.expect("fan vertex with the path color free");
        for j in 0..w {
            let (here, next) = (self.link(u, fan[j]), self.link(u, fan[j + 1]));
            let col = self.color[next];
            self.set(next, None);
            self.set(here, col);
        }
        let last = self.link(u, fan[w]);
        self.set(last, Some(d));
    }
}
