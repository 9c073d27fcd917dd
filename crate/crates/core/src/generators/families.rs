use crate::error::{Error, Result};
use crate::game::{Game, SisPartition};
use crate::num::{Field, Rational};

fn check_params(n: usize, eps: &Rational) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n must exceed 1, got {n}")));
    }
    if !eps.is_positive() || !Rational::one().minus(eps).is_positive() {
        return Err(Error::InvalidParams(format!("eps must lie in (0,1), got {eps}")));
    }
    Ok(())
}

fn square_plus_one(n: usize, u1: impl Fn(usize, usize) -> Rational, u2: impl Fn(usize, usize) -> Rational) -> Game {
    let table = |f: &dyn Fn(usize, usize) -> Rational| -> Vec<Vec<Rational>> {
        (0..n).map(|i| (0..=n).map(|j| f(i, j)).collect()).collect()
    };
    let game = Game::new(table(&u1), table(&u2), SisPartition::singletons(n).cells().to_vec())
        .expect("family tables are square plus one column");
    let rows = (1..=n).map(|i| format!("r{i}")).collect();
    let cols = (1..=n + 1).map(|j| format!("c{j}")).collect();
    game.with_labels(rows, cols).expect("label counts match")
}

/// `n × (n+1)` game in which full observability is worth almost 1 to the
/// row player but any coarsening leaves her at most `eps`.
///
/// Row `i` (1-based) earns `i·eps/n` against the first `n` columns and
/// `1 − (n−i)·eps/n` against the last. The column player gets `(1+1/n)/2`
/// off the diagonal of the first block, 0 on it, and 1/2 in the last column.
/// The partition is all singletons; swap it with [`Game::with_partition`].
pub fn gen_close_to_full(n: usize, eps: &Rational) -> Result<Game> {
    check_params(n, eps)?;
    let nn = Rational::from_int(n as i64);
    let one = Rational::one();
    let half = Rational::from_int(1).over(&Rational::from_int(2));
    let off_diag = one.plus(&one.over(&nn)).times(&half);
    Ok(square_plus_one(
        n,
        |i, j| {
            let i = Rational::from_int(i as i64 + 1);
            if j < n {
                i.times(eps).over(&nn)
            } else {
                one.minus(&nn.minus(&i).times(eps).over(&nn))
            }
        },
        |i, j| {
            if j == n {
                half.clone()
            } else if i == j {
                Rational::zero()
            } else {
                off_diag.clone()
            }
        },
    ))
}

/// `n × (n+1)` game in which two SISes already give the row player
/// `1 − eps` while a single SIS leaves her with 0.
///
/// The row player gets 1 on the diagonal of the first block, `1 − eps` off
/// it, and 0 in the last column. The column player gets 0 on the diagonal,
/// 1 off it, and `(n − 1/2)/n` in the last column. The partition is all
/// singletons.
pub fn gen_close_to_none(n: usize, eps: &Rational) -> Result<Game> {
    check_params(n, eps)?;
    let nn = Rational::from_int(n as i64);
    let one = Rational::one();
    let last = nn.minus(&Rational::from_int(1).over(&Rational::from_int(2))).over(&nn);
    Ok(square_plus_one(
        n,
        |i, j| {
            if j == n {
                Rational::zero()
            } else if i == j {
                one.clone()
            } else {
                one.minus(eps)
            }
        },
        |i, j| {
            if j == n {
                last.clone()
            } else if i == j {
                Rational::zero()
            } else {
                one.clone()
            }
        },
    ))
}
