use super::OracleError;
use crate::perm::Perm;

/// `C_{S_degree}(⟨gens⟩)` by backtracking: once `c(a) = b` is fixed,
/// `c(g(a)) = g(b)` is forced for every generator `g`.
pub fn centralizer_in_sym(
    gens: &[Perm],
    degree: usize,
    cap: usize,
) -> Result<Vec<Perm>, OracleError> {
    for g in gens {
        if g.degree() != degree {
            return Err(OracleError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    let mut out = Vec::new();
    let state = State {
        image: vec![None; degree],
        used: vec![false; degree],
    };
    search(gens, state, cap, &mut out)?;
    out.sort();
    Ok(out)
}

#[derive(Clone)]
struct State {
    image: Vec<Option<u32>>,
    used: Vec<bool>,
}

impl State {
    fn assign(&mut self, gens: &[Perm], a: u32, b: u32) -> bool {
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            match self.image[a as usize] {
                Some(c) if c == b => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used[b as usize] {
                return false;
            }
            self.image[a as usize] = Some(b);
            self.used[b as usize] = true;
            for g in gens {
                stack.push((g.apply(a), g.apply(b)));
            }
        }
        true
    }
}

fn search(gens: &[Perm], state: State, cap: usize, out: &mut Vec<Perm>) -> Result<(), OracleError> {
    let Some(x) = state.image.iter().position(Option::is_none) else {
        if out.len() == cap {
            return Err(OracleError::CapExceeded { cap });
        }
        let images = state.image.iter().map(|c| c.unwrap()).collect();
        out.push(Perm::from_images(images).expect("assignment is a bijection"));
        return Ok(());
    };
    for y in 0..state.used.len() as u32 {
        if state.used[y as usize] {
            continue;
        }
        let mut next = state.clone();
        if next.assign(gens, x as u32, y) {
            search(gens, next, cap, out)?;
        }
    }
    Ok(())
}
