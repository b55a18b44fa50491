"""Human-readable reports: solution genome sheet, catalog listings,
comparison summaries."""

from __future__ import annotations

from .catalog import enumerate_compositions


def solution_report(payload: dict) -> str:
    """Genome sheet for one solution: building-level indicators, then one
    block per window with its buildable specification."""
    design = payload["design"]
    lines = []
    lines.append(f"Solution {payload.get('id') or '(unnamed)'} — "
                 f"{payload.get('location', '?')} {payload.get('scenario', '?')}")
    lines.append("")
    lines.append("Building level")
    lines.append(f"  ED_Heating          {payload['edh']:10.1f}  kWh/m2*year")
    lines.append(f"  ED_Cooling          {payload['edc']:10.1f}  kWh/m2*year")
    lines.append(f"  ED_Heating+Cooling  {payload['edh'] + payload['edc']:10.1f}"
                 f"  kWh/m2*year")
    lines.append(f"  NCT                 {payload['nct']:10.0f}  h")
    lines.append(f"  WWR                 {100.0 * design['wwr']:10.0f}  %")
    lines.append(f"  K                   {design['k']:10.2f}  W/m2*K")
    lines.append(f"  Q_sol,Jul           {payload['q_sol_jul']:10.2f}  kWh/m2")
    lines.append(f"  Frame/blind solar reflectance  {design['reflectance']:.2f}")
    pen = payload.get("penalties", {})
    if pen:
        flat = ", ".join(f"{k}={v:.4g}" for k, v in pen.items())
        lines.append(f"  Penalties           {flat}")
    lines.append("")
    lines.append("Component level")
    facade_of = {}
    for facade, sc in design["sc_by_facade"].items():
        facade_of[facade] = sc
    for win in design["windows"]:
        sid = win["id"]
        lines.append(f"  Window {sid}")
        lines.append(f"    Width               {win['width_m']:.1f} m")
        lines.append(f"    Height              {win['height_m']:.1f} m")
        lines.append(f"    Area                {win['area_m2']:.1f} m2")
        lines.append(f"    Glazing Composition {win['glazing_code']}")
        lines.append(f"    Window U-value      {win['u_w']:.1f} W/m2*K")
        lines.append(f"    Frame Material      {design['frame']}")
    for facade, sc in design["sc_by_facade"].items():
        lines.append(f"  Facade {facade}: Shading Control SC{sc}")
        geom = design["shading_by_facade"].get(facade, {})
        built = {k: v for k, v in geom.items() if v}
        lines.append(f"    Fixed shading: {built if built else 'none'}")
    return "\n".join(lines)


def catalog_listing(catalog, orientation) -> list:
    """Rows of legal compositions for one orientation."""
    return [
        {"code": c.code, "u_g": round(c.u_g, 4), "shgc": round(c.shgc, 4),
         "vt": round(c.vt, 4)}
        for c in enumerate_compositions(catalog, orientation)
    ]


def comparison_report(report: dict) -> str:
    lines = [f"Pairwise comparison, alpha={report['alpha']} "
             f"(threshold {report['threshold']:.4g})"]
    for row in report["rows"]:
        verdict = "significant" if row["significant"] else "not significant"
        lines.append(
            f"  {row['label']}: {row['a_algorithm']} median "
            f"{row['a_median']:.6g} [{row['a_q25']:.6g}, {row['a_q75']:.6g}] vs "
            f"{row['b_algorithm']} median {row['b_median']:.6g} "
            f"[{row['b_q25']:.6g}, {row['b_q75']:.6g}], "
            f"p={row['p_value']:.4g} ({verdict})")
    return "\n".join(lines)
