//! Generates the bundled catalog of order-336 groups.

use atdcensus::io::write_group_catalog;
use atdcensus::perm::{Permutation, PermutationGroup};

fn pgl27() -> PermutationGroup {
    // Projective line over F7: points 0..6, infinity = 7.
    let translate = Permutation::from_cycles(8, &[vec![0, 1, 2, 3, 4, 5, 6]]).unwrap();
    let scale = Permutation::from_cycles(8, &[vec![1, 3, 2, 6, 4, 5]]).unwrap();
    let invert = Permutation::from_cycles(8, &[vec![0, 7], vec![2, 4], vec![3, 5]]).unwrap();
    PermutationGroup::from_generators(8, vec![translate, scale, invert]).unwrap()
}

fn sl27() -> PermutationGroup {
    // Nonzero column vectors of F7^2, index = 7a + b - 1 over (a,b) != (0,0).
    let idx = |a: u32, b: u32| -> u32 { 7 * a + b - 1 };
    let mut s_img = vec![0u32; 48];
    let mut t_img = vec![0u32; 48];
    for a in 0..7u32 {
        for b in 0..7u32 {
            if a == 0 && b == 0 {
                continue;
            }
            // S = [[0,-1],[1,0]]: (a,b) -> (-b, a); T = [[1,1],[0,1]]: (a,b) -> (a+b, b).
            s_img[idx(a, b) as usize] = idx((7 - b) % 7, a);
            t_img[idx(a, b) as usize] = idx((a + b) % 7, b);
        }
    }
    PermutationGroup::from_generators(
        48,
        vec![
            Permutation::from_images(s_img).unwrap(),
            Permutation::from_images(t_img).unwrap(),
        ],
    )
    .unwrap()
}

fn psl27_x_c2() -> PermutationGroup {
    // PSL(2,7) on the projective line plus a central swap on two new points.
    let translate = Permutation::from_cycles(10, &[vec![0, 1, 2, 3, 4, 5, 6]]).unwrap();
    let neg_invert = Permutation::from_cycles(10, &[vec![0, 7], vec![1, 6], vec![2, 3], vec![4, 5]]).unwrap();
    let swap = Permutation::from_cycles(10, &[vec![8, 9]]).unwrap();
    PermutationGroup::from_generators(10, vec![translate, neg_invert, swap]).unwrap()
}

fn main() {
    let groups = vec![
        ("PGL_2_7".to_string(), pgl27()),
        ("SL_2_7".to_string(), sl27()),
        ("PSL_2_7xC2".to_string(), psl27_x_c2()),
    ];
    for (name, g) in &groups {
        assert_eq!(g.order().unwrap(), 336, "{name}");
    }
    print!("{}", write_group_catalog(&groups).unwrap());
}
