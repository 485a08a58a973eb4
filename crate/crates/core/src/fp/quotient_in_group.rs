//! Epimorphisms from a finitely presented group onto a given finite
//! permutation group, up to distinct kernels (the catalogue-driven
//! alternative to low-index quotient search).

use crate::error::{Error, Result};
use crate::fp::{FpPresentation, Word};
use crate::perm::{Permutation, PermutationGroup};

/// A surjective homomorphism onto the target group, given by generator
/// images. `image_order` equals the index of its kernel in the source.
#[derive(Clone, Debug)]
pub struct Epimorphism {
    pub images: Vec<Permutation>,
    pub image_order: u128,
}

/// Finds every epimorphism from `presentation` onto `target`, one per
/// kernel. Backtracks over generator images with forced-assignment
/// propagation through relators in which exactly one unassigned generator
/// occurs exactly once.
pub fn quotient_search_in_group(
    presentation: &FpPresentation,
    target: &PermutationGroup,
    element_cap: u64,
) -> Result<Vec<Epimorphism>> {
    let elements = target.elements_capped(element_cap)?;
    let order = target.order()?;
    let degree = target.degree();
    let k = presentation.generator_count();
    let relators = presentation.normalized_relators();

    let mut found: Vec<Epimorphism> = Vec::new();
    let mut assigned: Vec<Option<Permutation>> = vec![None; k];

    struct Ctx<'a> {
        elements: &'a [Permutation],
        relators: &'a [Word],
        order: u128,
        degree: usize,
    }

    fn evaluate(images: &[Option<Permutation>], w: &Word, degree: usize) -> Option<Permutation> {
        let mut out = Permutation::identity(degree);
        for (g, inv) in w.letters() {
            let img = images[g].as_ref()?;
            out = if inv { out.then(&img.inverse()) } else { out.then(img) };
        }
        Some(out)
    }

    /// Forces assignments; returns false on a violated relator.
    fn propagate(images: &mut [Option<Permutation>], ctx: &Ctx) -> bool {
        loop {
            let mut changed = false;
            for r in ctx.relators {
                let mut unassigned: Option<(usize, usize, bool)> = None; // (gen, count, inverse)
                let mut ok = true;
                for (g, inv) in r.letters() {
                    if images[g].is_none() {
                        match &mut unassigned {
                            None => unassigned = Some((g, 1, inv)),
                            Some((g0, count, _)) if *g0 == g => *count += 1,
                            Some(_) => {
                                ok = false;
                                break;
                            }
                        }
                    }
                }
                if !ok {
                    continue;
                }
                match unassigned {
                    None => {
                        if !evaluate(images, r, ctx.degree).unwrap().is_identity() {
                            return false;
                        }
                    }
                    Some((g, 1, _)) => {
                        // Solve u x^e v = 1 for x.
                        let mut prefix = Permutation::identity(ctx.degree);
                        let mut suffix = Permutation::identity(ctx.degree);
                        let mut seen = false;
                        let mut exponent = false;
                        for (h, inv) in r.letters() {
                            if h == g && !seen {
                                seen = true;
                                exponent = inv;
                                continue;
                            }
                            let img = images[h].as_ref().unwrap();
                            let img = if inv { img.inverse() } else { img.clone() };
                            if seen {
                                suffix = suffix.then(&img);
                            } else {
                                prefix = prefix.then(&img);
                            }
                        }
                        let x_pow = prefix.inverse().then(&suffix.inverse());
                        let x = if exponent { x_pow.inverse() } else { x_pow };
                        images[g] = Some(x);
                        changed = true;
                    }
                    Some(_) => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(
        images: &mut [Option<Permutation>],
        ctx: &Ctx,
        found: &mut Vec<Epimorphism>,
    ) -> Result<()> {
        if !propagate(images, ctx) {
            return Ok(());
        }
        match images.iter().position(|i| i.is_none()) {
            None => {
                let imgs: Vec<Permutation> =
                    images.iter().map(|i| i.clone().unwrap()).collect();
                let span = PermutationGroup::from_generators(ctx.degree, imgs.clone())?;
                if span.order()? != ctx.order {
                    return Ok(());
                }
                if !found
                    .iter()
                    .any(|e| same_kernel(&e.images, &imgs, ctx.degree, ctx.order))
                {
                    found.push(Epimorphism {
                        images: imgs,
                        image_order: ctx.order,
                    });
                }
                Ok(())
            }
            Some(free) => {
                for candidate in ctx.elements {
                    let mut next = images.to_vec();
                    next[free] = Some(candidate.clone());
                    search(&mut next, ctx, found)?;
                }
                Ok(())
            }
        }
    }

    let ctx = Ctx {
        elements: &elements,
        relators: &relators,
        order,
        degree,
    };
    if k == 0 {
        return Err(Error::GroupArgument("presentation has no generators".into()));
    }
    search(&mut assigned, &ctx, &mut found)?;
    Ok(found)
}

/// Two surjections onto the same group have equal kernels iff the diagonal
/// subgroup generated by the paired images is the graph of an automorphism,
/// i.e. has the group's order.
fn same_kernel(a: &[Permutation], b: &[Permutation], degree: usize, order: u128) -> bool {
    let paired: Vec<Permutation> = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let mut images: Vec<u32> = x.images().to_vec();
            images.extend(y.images().iter().map(|&p| p + degree as u32));
            Permutation::from_images(images).unwrap()
        })
        .collect();
    let diag = PermutationGroup::from_generators(2 * degree, paired).unwrap();
    diag.order().unwrap() == order
}
