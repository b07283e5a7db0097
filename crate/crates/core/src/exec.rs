//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature (on by default) [`Mode::Parallel`] runs on the
//! rayon pool; without it every mode runs sequentially. Output order always
//! follows input order.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

impl Default for Mode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

pub fn map<T, R, F>(mode: Mode, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
        _ => items.into_iter().map(f).collect(),
    }
}

/// Like [`map`] but stops at the first error in input order.
pub fn try_map<T, R, E, F>(mode: Mode, items: Vec<T>, f: F) -> Result<Vec<R>, E>
where
    T: Send,
    R: Send,
    E: Send,
    F: Fn(T) -> Result<R, E> + Sync + Send,
{
    map(mode, items, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..200).collect();
        let a = map(Mode::Sequential, xs.clone(), |x| x * x);
        let b = map(Mode::Parallel, xs, |x| x * x);
        assert_eq!(a, b);
        let r: Result<Vec<u64>, u64> = try_map(Mode::Parallel, vec![1, 2, 3], |x| if x == 2 { Err(x) } else { Ok(x) });
        assert_eq!(r, Err(2));
    }
}
