macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            include!(concat!("../examples/", $file));
        }

        #[test]
        fn $name() {
            $name::run_example();
        }
    };
}

example!(klimov_symmetrization, "klimov_symmetrization.rs");
example!(rearrangements, "rearrangements.rs");
example!(rearrangement_norms, "rearrangement_norms.rs");
example!(hardy_inequality, "hardy_inequality.rs");
example!(radial_barrier, "radial_barrier.rs");
example!(anisotropic_solver, "anisotropic_solver.rs");
example!(comparison_check, "comparison_check.rs");
example!(regularity_table, "regularity_table.rs");
example!(distributional_truncation, "distributional_truncation.rs");
example!(experiment_harness, "experiment_harness.rs");
