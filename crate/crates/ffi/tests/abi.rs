use std::ffi::{CStr, CString};
use std::ptr;

use chainmap_ffi::*;

fn model(name: &str) -> *mut CmComplex {
    let name = CString::new(name).unwrap();
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { cm_complex_model(name.as_ptr(), &mut k) }, CmStatus::Ok);
    k
}

#[test]
fn square_to_square_round_trip() {
    unsafe {
        let sq = model("square");
        assert_eq!(cm_complex_count(sq, 0), 4);
        assert_eq!(cm_complex_count(sq, 1), 4);
        let mut b = [9usize; 3];
        assert_eq!(cm_complex_betti(sq, b.as_mut_ptr(), 3), CmStatus::Ok);
        assert_eq!(b, [1, 1, 0]);

        let mut p = ptr::null_mut();
        assert_eq!(cm_param_new(sq, sq, &mut p), CmStatus::Ok);
        assert_eq!(cm_param_generator_count(p), 2);
        assert_eq!(cm_param_homotopy_count(p), 15);

        let mut g = ptr::null_mut();
        let mut opt = f64::NAN;
        assert_eq!(cm_map_lp_random_vertex(p, 3, &mut g, &mut opt), CmStatus::Ok);
        assert!((opt - 2.0).abs() < 1e-6, "optimum {opt}");
        assert_eq!(cm_map_is_chain_map(g), 1);

        let mut s = ptr::null_mut();
        assert_eq!(cm_map_to_json(g, &mut s), CmStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap();
        assert!(text.contains("\"entries\""));
        cm_string_free(s);

        let mut base = ptr::null_mut();
        assert_eq!(cm_map_base(p, &mut base), CmStatus::Ok);
        assert_eq!(cm_map_is_chain_map(base), 1);
        assert!(cm_map_norm_objective(base) >= opt - 1e-9);

        cm_map_free(base);
        cm_map_free(g);
        cm_param_free(p);
        cm_complex_free(sq);
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let tri = model("triangle");
        let mut s = ptr::null_mut();
        assert_eq!(cm_complex_to_json(tri, &mut s), CmStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(cm_complex_from_json(s, &mut back), CmStatus::Ok);
        assert_eq!(cm_complex_count(back, 1), 3);
        cm_string_free(s);
        cm_complex_free(back);
        cm_complex_free(tri);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let name = CString::new("heptadecahedron").unwrap();
        let mut k = ptr::null_mut();
        assert_eq!(cm_complex_model(name.as_ptr(), &mut k), CmStatus::InvalidInput);
        assert!(k.is_null());
        assert!(!cm_last_error().is_null());

        assert_eq!(cm_complex_model(ptr::null(), &mut k), CmStatus::NullPointer);
        let bad = CString::new("{not json").unwrap();
        assert_eq!(cm_complex_from_json(bad.as_ptr(), &mut k), CmStatus::InvalidInput);
        let mut p = ptr::null_mut();
        assert_eq!(cm_param_new(ptr::null(), ptr::null(), &mut p), CmStatus::NullPointer);

        assert!(cm_map_norm_objective(ptr::null()).is_nan());
        assert_eq!(cm_complex_count(ptr::null(), 0), 0);
        cm_complex_free(ptr::null_mut());
        cm_string_free(ptr::null_mut());
    }
}
