"""Plain-SVG snapshots of 2-D planner state."""

from __future__ import annotations

from .cspace import Scenario

SIZE = 600


def render_tree(scenario: Scenario, points, tree_edges, path=(), title: str = "",
                path_is_current: bool = True) -> str:
    """Obstacles, samples, tree edges and the best path as an SVG document.

    ``tree_edges`` are ``(parent, child)`` index pairs. A path found in an
    earlier iteration is drawn dashed.
    """
    if scenario.dimension != 2:
        raise ValueError("snapshots are only drawn for 2-D scenarios")
    (x0, y0), (x1, y1) = scenario.bounds
    sx, sy = SIZE / (x1 - x0), SIZE / (y1 - y0)

    def px(p):
        # flip y so the scenario's up is up on screen
        return (p[0] - x0) * sx, SIZE - (p[1] - y0) * sy

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE + 24}" '
           f'viewBox="0 -24 {SIZE} {SIZE + 24}">',
           f'<text x="4" y="-6" font-family="monospace" font-size="14">{title}</text>',
           f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>']
    for ob in scenario.obstacles:
        if ob.kind == "box":
            ax, ay = px((ob.lo[0], ob.hi[1]))
            out.append(f'<rect x="{ax:.2f}" y="{ay:.2f}" width="{(ob.hi[0] - ob.lo[0]) * sx:.2f}" '
                       f'height="{(ob.hi[1] - ob.lo[1]) * sy:.2f}" fill="#d33"/>')
        else:
            cx, cy = px(ob.center)
            out.append(f'<ellipse cx="{cx:.2f}" cy="{cy:.2f}" rx="{ob.radius * sx:.2f}" '
                       f'ry="{ob.radius * sy:.2f}" fill="#d33"/>')
    gx, gy = px(scenario.goal.center)
    out.append(f'<ellipse cx="{gx:.2f}" cy="{gy:.2f}" rx="{max(scenario.goal.radius * sx, 3):.2f}" '
               f'ry="{max(scenario.goal.radius * sy, 3):.2f}" fill="#3cc" fill-opacity="0.6"/>')
    for p in points:
        x, y = px(p)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.5" fill="#555"/>')
    for a, b in tree_edges:
        (ax, ay), (bx, by) = px(points[a]), px(points[b])
        out.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
                   f'stroke="#36c" stroke-width="0.8"/>')
    if len(path) > 1:
        coords = " ".join("{:.2f},{:.2f}".format(*px(points[i])) for i in path)
        dash = "" if path_is_current else ' stroke-dasharray="6,4"'
        out.append(f'<polyline points="{coords}" fill="none" stroke="#0a0" stroke-width="3"{dash}/>')
    sx0, sy0 = px(scenario.x_init)
    out.append(f'<circle cx="{sx0:.2f}" cy="{sy0:.2f}" r="6" fill="#a3c"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
