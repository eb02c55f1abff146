use std::collections::BTreeSet;

use ipcg_core::trees::{gen_binary_trees, gen_full_binary_trees, Node, RootedTree};

/// Rooted unordered full binary trees: a(1) = 1, and for n > 1
/// a(n) = sum over i < n - i of a(i) a(n - i), plus a(n/2)(a(n/2) + 1)/2
/// when n is even.
fn wedderburn_etherington(max: usize) -> Vec<u64> {
    let mut a = vec![0u64; max + 1];
    a[1] = 1;
    for n in 2..=max {
        let mut s = 0;
        for i in 1..n {
            let j = n - i;
            if i < j {
                s += a[i] * a[j];
            }
        }
        if n % 2 == 0 {
            let h = a[n / 2];
            s += h * (h + 1) / 2;
        }
        a[n] = s;
    }
    a
}

/// AHU string of a rooted full binary tree.
fn ahu(t: &RootedTree, v: usize) -> String {
    match t.nodes()[v] {
        Node::Leaf => "()".to_string(),
        Node::Internal(a, b) => {
            let (x, y) = (ahu(t, a), ahu(t, b));
            let (x, y) = if x <= y { (x, y) } else { (y, x) };
            format!("({x}{y})")
        }
    }
}

/// All ordered shapes with `n` leaves (Catalan many), as AHU strings.
fn ordered_shapes(n: usize) -> Vec<String> {
    if n == 1 {
        return vec!["()".into()];
    }
    let mut out = Vec::new();
    for i in 1..n {
        for l in ordered_shapes(i) {
            for r in ordered_shapes(n - i) {
                let (x, y) = if l <= r { (l.clone(), r) } else { (r, l.clone()) };
                out.push(format!("({x}{y})"));
            }
        }
    }
    out
}

#[test]
fn full_binary_counts_follow_recurrence() {
    let a = wedderburn_etherington(12);
    assert_eq!(&a[1..], &[1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451]);
    for n in 1..=12 {
        let trees = gen_full_binary_trees(n).unwrap();
        assert_eq!(trees.len() as u64, a[n], "n = {n}");
    }
}

#[test]
fn full_binary_shapes_match_catalan_dedup() {
    for n in 1..=9 {
        let oracle: BTreeSet<String> = ordered_shapes(n).into_iter().collect();
        let trees = gen_full_binary_trees(n).unwrap();
        let mine: BTreeSet<String> = trees.iter().map(|t| ahu(t, t.root())).collect();
        assert_eq!(mine.len(), trees.len(), "duplicates at n = {n}");
        assert!(trees.iter().all(|t| t.leaf_count() == n));
        assert_eq!(mine, oracle, "n = {n}");
    }
}

/// Unrooted tree as adjacency lists over vertices `0..`, leaves unlabeled.
type Adj = Vec<Vec<usize>>;

fn rooted_code(adj: &Adj, v: usize, parent: usize) -> String {
    let mut kids: Vec<String> =
        adj[v].iter().filter(|&&u| u != parent).map(|&u| rooted_code(adj, u, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism invariant of an unrooted tree: the least rooted code over all
/// roots.
fn unrooted_code(adj: &Adj) -> String {
    (0..adj.len()).map(|r| rooted_code(adj, r, usize::MAX)).min().unwrap()
}

/// Unrooted binary shapes with `n` leaves, grown by inserting a new leaf onto
/// every edge of every smaller shape.
fn insertion_shapes(n: usize) -> BTreeSet<String> {
    let mut level: Vec<Adj> = vec![vec![vec![3], vec![3], vec![3], vec![0, 1, 2]]];
    for _ in 4..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for adj in &level {
            for a in 0..adj.len() {
                for &b in &adj[a] {
                    if a > b {
                        continue;
                    }
                    let mut g = adj.clone();
                    let mid = g.len();
                    let leaf = mid + 1;
                    g.push(vec![a, b, leaf]);
                    g.push(vec![mid]);
                    let pa = g[a].iter().position(|&x| x == b).unwrap();
                    g[a][pa] = mid;
                    let pb = g[b].iter().position(|&x| x == a).unwrap();
                    g[b][pb] = mid;
                    if seen.insert(unrooted_code(&g)) {
                        next.push(g);
                    }
                }
            }
        }
        level = next;
    }
    level.iter().map(unrooted_code).collect()
}

fn adj_of(t: &ipcg_core::trees::UnrootedBinaryTree) -> Adj {
    let mut adj = vec![Vec::new(); t.vertex_count()];
    for &(a, b) in t.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

#[test]
fn unrooted_counts() {
    let counts: Vec<usize> = (3..=16).map(|n| gen_binary_trees(n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 2, 4, 6, 11, 18, 37, 66, 135, 265, 552]);
    assert_eq!(gen_binary_trees(2).unwrap().len(), 1);
}

#[test]
fn unrooted_shapes_match_leaf_insertion() {
    for n in 3..=11 {
        let oracle = insertion_shapes(n);
        let trees = gen_binary_trees(n).unwrap();
        let mine: BTreeSet<String> = trees.iter().map(|t| unrooted_code(&adj_of(t))).collect();
        assert_eq!(mine.len(), trees.len(), "duplicates at n = {n}");
        assert_eq!(mine, oracle, "n = {n}");
    }
}

#[test]
fn trees_are_binary_with_indexed_pendant_edges() {
    for n in 3..=12 {
        for t in gen_binary_trees(n).unwrap() {
            let adj = adj_of(&t);
            assert_eq!(t.vertex_count(), 2 * n - 2);
            assert_eq!(t.edge_count(), 2 * n - 3);
            for (v, nb) in adj.iter().enumerate() {
                assert_eq!(nb.len(), if v < n { 1 } else { 3 }, "n = {n}, vertex {v}");
            }
            for i in 0..n {
                let (a, b) = t.edges()[i];
                assert!(a == i || b == i, "edge {} is not the pendant edge of leaf {}", i + 1, i + 1);
                assert!(t.is_leaf_edge(i));
            }
            for e in n..t.edge_count() {
                assert!(!t.is_leaf_edge(e));
            }
        }
    }
}
