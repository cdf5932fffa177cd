"""One grow-up experiment end to end, through the library API.

Porous medium diffusion (m = 2) with a linear source on (-1, 1): every
solution grows up like t^1.  The script predicts the law, runs the
solver to t = 1000, fits the observed rate at three probes, and renders
the same verdict the `growup verdict` subcommand would.
"""

from pathlib import Path

from growup import (
    InitialData,
    ProblemParams,
    exponent_report,
    fit_power,
    fits_to_csv,
    make_grid,
    run,
    verdict,
)

OUT = Path(__file__).with_name("out")


def main():
    OUT.mkdir(exist_ok=True)
    report = exponent_report(2.0, 1.0, 1.0)
    law = report.rate_inside
    print(f"regime: {report.regime.tag.value}; predicted law inside: "
          f"{law.form.value} with exponent {law.value:g}")

    pp = ProblemParams(2.0, 1.0, 1.0, InitialData("gaussian-bump"))
    grid = make_grid(1.0, 4, 1100.0)    # wall far beyond the t=1000 front
    series, state = run(pp, grid, 1e3, 1e7, probes=(0.0, 0.5, 2.0))
    print(f"solver: {state.status} at t={state.t:g}, "
          f"max u = {series.umax[-1]:.1f}, {len(series.t)} recorded times")

    fits = [fit_power(series, x, (100.0, 1000.0)) for x in (0.0, 0.5, 2.0)]
    for f in fits:
        print(f"  probe x={f.probe:<4}: u ~ t^{f.fitted:.3f} "
              f"(residual {f.residual:.1e})")

    out = verdict(report, fits)
    judged = sum(r["status"] == "pass" for r in out["probes"])
    print(f"verdict: {'PASS' if out['all_pass'] else 'FAIL'} "
          f"({judged}/{len(out['probes'])} probes within tolerance)")

    fits_to_csv(fits, OUT / "pipeline_fits.csv")
    series.to_csv(OUT / "pipeline_series.csv")
    print("wrote out/pipeline_fits.csv, out/pipeline_series.csv")


if __name__ == "__main__":
    main()
