"""Figures: SVG and DOT for configurations and tracks, matplotlib reports.

The SVG layout is a heuristic: crossings go on a circle in the order in
which the boundary walk of the largest face first meets them, and each
edge is drawn as a curve bowed toward the centre.  It is meant to be
looked at, not measured.
"""

import math
from xml.sax.saxutils import escape

COLORS = {"a": "#c0392b", "b": "#2471a3"}


def _vertex_order(cfg):
    vid = cfg.vertex_of()
    faces = sorted(range(len(cfg.faces())), key=lambda f: (-cfg.prong(f), f))
    order, seen = [], set()
    for f in faces:
        for h in cfg.faces()[f]:
            v = vid[h]
            if v not in seen:
                seen.add(v)
                order.append(v)
    return order


def layout(cfg, size=480, margin=40):
    """Positions of the crossings on a circle, face-first order."""
    order = _vertex_order(cfg)
    n = len(order)
    r = size / 2 - margin
    c = size / 2
    pos = {}
    for t, v in enumerate(order):
        ang = 2 * math.pi * t / max(n, 1) - math.pi / 2
        pos[v] = (c + r * math.cos(ang), c + r * math.sin(ang))
    return pos


def config_svg(cfg, size=480):
    """Standalone SVG drawing of ``cfg``."""
    pos = layout(cfg, size)
    vid = cfg.vertex_of()
    c = size / 2
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 60}" '
             f'viewBox="0 0 {size} {size + 60}">',
             f'<rect width="100%" height="100%" fill="white"/>']
    for h in range(0, cfg.n_half, 2):
        (x0, y0), (x1, y1) = pos[vid[h]], pos[vid[h ^ 1]]
        fam, idx = cfg.family[h], cfg.pair[h]
        # spread parallel edges apart by bending each one differently
        bend = 0.25 + 0.12 * ((h // 2) % 5)
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        qx, qy = mx + (c - mx) * bend, my + (c - my) * bend
        if vid[h] == vid[h ^ 1]:
            dx, dy = x0 - c, y0 - c
            qx, qy = x0 + dx * 0.4 - dy * 0.3, y0 + dy * 0.4 + dx * 0.3
            path = f"M{x0:.1f},{y0:.1f} Q{qx:.1f},{qy:.1f} {x0 + 1:.1f},{y0 + 1:.1f}"
        else:
            path = f"M{x0:.1f},{y0:.1f} Q{qx:.1f},{qy:.1f} {x1:.1f},{y1:.1f}"
        parts.append(f'<path d="{path}" fill="none" stroke="{COLORS[fam]}" stroke-width="2">'
                     f'<title>{fam}{idx} edge {h // 2}</title></path>')
    for v, (x, y) in sorted(pos.items()):
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="5" fill="black"/>')
        parts.append(f'<text x="{x + 7:.1f}" y="{y - 7:.1f}" font-size="11" '
                     f'font-family="sans-serif">{v}</text>')
    sig = cfg.signature()
    label = escape(f"{cfg.name or 'configuration'}: genus {sig.genus}, "
                   f"prongs {sorted(sig.prongs)}, sign {sig.sign}, k={cfg.k}")
    parts.append(f'<text x="10" y="{size + 25}" font-size="13" font-family="sans-serif">{label}</text>')
    parts.append(f'<text x="10" y="{size + 45}" font-size="11" font-family="sans-serif">'
                 f'<tspan fill="{COLORS["a"]}">a-curves</tspan>  '
                 f'<tspan fill="{COLORS["b"]}">b-curves</tspan></text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def config_dot(cfg):
    """Graphviz description: crossings as nodes, edges coloured by family."""
    vid = cfg.vertex_of()
    name = cfg.name or "configuration"
    lines = [f'graph "{name}" {{', "  node [shape=point];"]
    for v in range(len(cfg.vertices())):
        lines.append(f'  v{v} [xlabel="{v}"];')
    for h in range(0, cfg.n_half, 2):
        fam, idx = cfg.family[h], cfg.pair[h]
        lines.append(f'  v{vid[h]} -- v{vid[h ^ 1]} [color="{COLORS[fam]}", label="{fam}{idx}"];')
    for f, bd in enumerate(cfg.faces()):
        lines.append(f"  // face {f}: {cfg.prong(f)}-prong, edges {[h // 2 for h in bd]}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def track_dot(track):
    """Graphviz description of a train track: switches as nodes."""
    where = {}
    for i, s in enumerate(track.switches):
        for e in s.sideA:
            where[e] = (i, "A")
        for e in s.sideB:
            where[e] = (i, "B")
    lines = ["digraph track {", "  node [shape=box];"]
    for i in range(len(track.switches)):
        lines.append(f'  s{i} [label="switch {i}"];')
    for b in range(track.n_branches):
        (i, si), (j, sj) = where[(b, 0)], where[(b, 1)]
        style = ', style="dashed"' if (b, 0) in track.punctures or (b, 1) in track.punctures else ""
        lines.append(f'  s{i} -> s{j} [label="{b}", taillabel="{si}", headlabel="{sj}", '
                     f'arrowhead=none{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def report_figures(directory, stem, simulation=None, track_info=None):
    """Render matplotlib PNGs next to the CLI's delimited output.

    ``simulation`` is a :func:`strata.twist.summary` dict; ``track_info``
    has ``prongs`` (region cusp counts).  Returns the written paths.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    out = []
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    if simulation is not None:
        fig, ax = plt.subplots(figsize=(6, 4))
        diam = simulation["diameter"]
        ax.plot(range(1, len(diam) + 1), diam, marker="o", ms=3)
        ax.set_xlabel("step")
        ax.set_ylabel("largest column angle (rad)")
        ax.set_title(f"cone contraction, k={simulation['k']}")
        p = d / f"{stem}_diameter.png"
        fig.tight_layout()
        fig.savefig(p, dpi=100)
        plt.close(fig)
        out.append(p)
    if track_info is not None:
        fig, ax = plt.subplots(figsize=(6, 4))
        counts = {}
        for c in track_info["prongs"]:
            counts[c] = counts.get(c, 0) + 1
        xs = sorted(counts)
        ax.bar([str(x) for x in xs], [counts[x] for x in xs], color="#566573")
        ax.set_xlabel("cusps per region")
        ax.set_ylabel("regions")
        p = d / f"{stem}_regions.png"
        fig.tight_layout()
        fig.savefig(p, dpi=100)
        plt.close(fig)
        out.append(p)
    return out
