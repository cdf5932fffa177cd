"""Map the (m, p) quadrant into its growth regimes.

For each pair the exponent engine reports the two thresholds p0 and pF,
the regime between them, and the predicted long-time law inside and
outside the source interval.  The table is printed and also written to
out/regime_map.csv so it can be diffed against a sweep from the CLI:

    growup sweep --m 0.5,1,2,3 --p 0.5,0.75,1,1.5,2,4 --out somewhere
"""

from pathlib import Path

from growup import exponent_report

OUT = Path(__file__).with_name("out")

M_VALUES = (0.5, 1.0, 2.0, 3.0)
P_VALUES = (0.5, 0.75, 1.0, 1.5, 2.0, 4.0)


def law_text(law):
    if law is None:
        return "unspecified"
    return f"{law.form.value}({law.value:g})"


def main():
    OUT.mkdir(exist_ok=True)
    rows = []
    for m in M_VALUES:
        for p in P_VALUES:
            r = exponent_report(m, p, 1.0)
            tag = r.regime.tag.value
            branch = r.regime.branch.value if r.regime.branch else ""
            inside = law_text(r.rate_inside) if r.rate_inside else ""
            outside = law_text(r.rate_outside) if r.rate_inside else ""
            rows.append((m, p, r.p0, r.pF, tag, branch, inside, outside))
            print(f"m={m:<4g} p={p:<5g} p0={r.p0:<4g} pF={r.pF:<4g} "
                  f"{tag:<22} {branch:<4} {inside:<18} {outside}")

    path = OUT / "regime_map.csv"
    with open(path, "w") as fh:
        fh.write("m,p,p0,pF,regime,branch,inside,outside\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    print(f"\nwrote {path}")


if __name__ == "__main__":
    main()
