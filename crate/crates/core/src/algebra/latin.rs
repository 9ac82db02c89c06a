use super::{Element, Table};

/// Every Latin square of order `n` (all reduced and unreduced forms), in
/// lexicographic order of their row-major cells. Intended for `n <= 4`;
/// there are 576 squares of order 4.
pub fn latin_squares(n: usize) -> Vec<Table> {
    let mut out = Vec::new();
    let mut cells = vec![0; n * n];
    fill(n, 0, &mut cells, &mut out);
    out
}

fn fill(n: usize, pos: usize, cells: &mut [Element], out: &mut Vec<Table>) {
    if pos == n * n {
        out.push(Table::from_cells(n, cells.to_vec()));
        return;
    }
    let (r, c) = (pos / n, pos % n);
    for v in 0..n {
        let clash = (0..c).any(|j| cells[r * n + j] == v) || (0..r).any(|i| cells[i * n + c] == v);
        if !clash {
            cells[pos] = v;
            fill(n, pos + 1, cells, out);
        }
    }
}
