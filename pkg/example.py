from offdelta.oracle import GridSpec, certified_error
from offdelta.relative import ModelParams, solve_spectrum


if __name__ == "__main__":
    for g in (0.0, 1.0, 10.0, 100.0):
        params = ModelParams(g, 0.75)
        levels = solve_spectrum(params, 6)
        reference = certified_error(params, GridSpec(L=10.0, h=0.002), 6)
        print(f"g = {g:g}")
        for level, grid_value, error in zip(levels, reference.eigenvalues, reference.errors):
            print(f"  n={level.n} {level.parity.value:4s} eps={level.epsilon:.10f} grid={grid_value:.6f} +/- {error:.1e} {level.kind.value}")
