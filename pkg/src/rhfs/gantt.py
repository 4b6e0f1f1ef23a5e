"""Gantt rendering of schedules: one row per station, bars labeled with
the job and its pass number so re-entrant visits are distinguishable.

Both renderers consume the schedule artifact dict written by the solve
command (1-based indices), so charts can be produced long after a run.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .model import Instance, Schedule

_PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
    "#fabfd2", "#b6992d", "#499894",
)

ROW_H = 26
BAR_H = 18
MARGIN_LEFT = 96
MARGIN_TOP = 48
MARGIN_RIGHT = 24
MARGIN_BOTTOM = 28


def schedule_artifact(
    instance: Instance,
    schedule: Schedule,
    algorithm: str = "",
    seed: int | None = None,
) -> dict:
    """JSON-ready description of a schedule (1-based indices)."""
    ops = []
    for op in schedule.ops:
        ops.append(
            {
                "job": op.job + 1,
                "step": op.step + 1,
                "stage": op.stage + 1,
                "station": op.station + 1,
                "pass": instance.flow(op.job)[op.step].pass_num,
                "start": op.start,
                "end": op.end,
            }
        )
    return {
        "instance": instance.name,
        "algorithm": algorithm,
        "seed": seed,
        "cmax": max(op.end for op in schedule.ops),
        "stations_per_stage": list(instance.stations_per_stage),
        "ops": ops,
    }


def _station_rows(artifact: dict) -> list[tuple[int, int, list[dict]]]:
    """(stage, station, ops sorted by start) for every station, row order
    by stage then station."""
    counts = artifact["stations_per_stage"]
    rows = {
        (j, k): []
        for j in range(1, len(counts) + 1)
        for k in range(1, counts[j - 1] + 1)
    }
    for op in artifact["ops"]:
        rows[(op["stage"], op["station"])].append(op)
    out = []
    for (j, k), ops in sorted(rows.items()):
        out.append((j, k, sorted(ops, key=lambda o: o["start"])))
    return out


def _label(op: dict) -> str:
    if op["pass"]:
        return f"J{op['job']}#{op['pass']}"
    return f"J{op['job']}"


def render_svg(artifact: dict, width: int = 960) -> str:
    """Static SVG chart; valid XML for any feasible schedule."""
    rows = _station_rows(artifact)
    cmax = max(artifact["cmax"], 1)
    chart_w = width - MARGIN_LEFT - MARGIN_RIGHT
    height = MARGIN_TOP + len(rows) * ROW_H + MARGIN_BOTTOM
    scale = chart_w / cmax

    def x(t: float) -> float:
        return MARGIN_LEFT + t * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{MARGIN_LEFT}" y="18" font-size="14">'
        f'{escape(str(artifact.get("instance", "")))} '
        f'{escape(str(artifact.get("algorithm", "")))} '
        f'cmax={artifact["cmax"]}</text>',
    ]

    tick = max(1, cmax // 12)
    bottom = MARGIN_TOP + len(rows) * ROW_H
    for t in range(0, cmax + 1, tick):
        parts.append(
            f'<line x1="{x(t):.1f}" y1="{MARGIN_TOP}" x2="{x(t):.1f}" y2="{bottom}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x(t):.1f}" y="{MARGIN_TOP - 6}" text-anchor="middle" '
            f'fill="#555555">{t}</text>'
        )

    for i, (stage, station, ops) in enumerate(rows):
        y = MARGIN_TOP + i * ROW_H
        parts.append(
            f'<text x="8" y="{y + ROW_H // 2 + 4}" fill="#333333">'
            f"OP{stage}-WS{station}</text>"
        )
        for op in ops:
            bar_w = max(1.0, (op["end"] - op["start"]) * scale)
            color = _PALETTE[(op["job"] - 1) % len(_PALETTE)]
            parts.append(
                f'<rect x="{x(op["start"]):.1f}" y="{y + (ROW_H - BAR_H) / 2:.1f}" '
                f'width="{bar_w:.1f}" height="{BAR_H}" fill="{color}" '
                'stroke="#444444" stroke-width="0.5"/>'
            )
            label = escape(_label(op))
            if bar_w >= 7 * len(label):
                parts.append(
                    f'<text x="{x(op["start"]) + bar_w / 2:.1f}" '
                    f'y="{y + ROW_H // 2 + 4}" text-anchor="middle" '
                    f'fill="#111111">{label}</text>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_text(artifact: dict, width: int = 100) -> str:
    """Fixed-width chart; each station is one row, each bar labeled."""
    rows = _station_rows(artifact)
    cmax = max(artifact["cmax"], 1)
    scale = (width - 1) / cmax
    name_w = max(len(f"OP{j}-WS{k}") for j, k, _ in rows)
    lines = [f"{artifact.get('instance', '')}  cmax={artifact['cmax']}"]
    for stage, station, ops in rows:
        canvas = [" "] * width
        for op in ops:
            a = int(op["start"] * scale)
            b = max(a + 1, int(op["end"] * scale))
            for c in range(a, min(b, width)):
                canvas[c] = "="
            if a < width:
                canvas[a] = "|"
            label = _label(op)
            for c, ch in enumerate(label, start=a + 1):
                if c < min(b, width) - 0:
                    canvas[c] = ch
        lines.append(f"OP{stage}-WS{station}".ljust(name_w) + " " + "".join(canvas).rstrip())
    return "\n".join(lines) + "\n"
