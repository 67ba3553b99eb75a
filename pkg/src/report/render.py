import json

from src.report.verdict import Status, Verdict, fmt_fraction

MARKERS = {
    Status.PASS: "✅ PASS",
    Status.PASS_CERTIFIED: "🟡 PASS (certified)",
    Status.FAIL: "❌ FAIL",
    Status.UNDECIDED: "⏸️ UNDECIDED",
}


def result_payload(command: str, prime, verdict: Verdict, payload: dict | None = None) -> dict:
    """The JSON document every command emits; the key set never changes."""
    return {
        "command": command,
        "prime": int(prime),
        "verdict": verdict.status.value,
        "name": verdict.name,
        "uncovered": None if verdict.uncovered is None else fmt_fraction(verdict.uncovered),
        "conditions": [c.to_dict() for c in verdict.conditions],
        "witnesses": [w.to_dict() for w in verdict.all_witnesses()],
        "measures": {k: fmt_fraction(v) for k, v in verdict.measures.items()},
        "depth": verdict.depth,
        "decisions": verdict.all_decisions(),
        "payload": payload or {},
    }


def render_json(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)


def _verdict_lines(verdict: Verdict, indent: int) -> list[str]:
    pad = "   " * indent
    head = f"{pad}{MARKERS[verdict.status]}  {verdict.name}"
    if verdict.status == Status.PASS_CERTIFIED:
        head += f"  (unverified measure <= {fmt_fraction(verdict.uncovered or 0)} at depth {verdict.depth})"
    elif verdict.status == Status.UNDECIDED and verdict.depth is not None:
        head += f"  (depth {verdict.depth})"
    lines = [head]
    for key, value in verdict.measures.items():
        lines.append(f"{pad}   {key}: {fmt_fraction(value)}")
    for witness in verdict.witnesses:
        lines.append(f"{pad}   🚨 {witness.kind}: {witness.description}")
        if witness.cylinders:
            lines.append(f"{pad}      cylinders: {', '.join(c.token() for c in witness.cylinders)}")
        if witness.cell is not None:
            lines.append(f"{pad}      cell: {witness.cell.token()}")
        if witness.region is not None:
            lines.append(f"{pad}      region: {witness.region}")
    for note in verdict.report:
        lines.append(f"{pad}   {note}")
    for condition in verdict.conditions:
        lines.extend(_verdict_lines(condition, indent + 1))
    return lines


def render_text(document: dict, verdict: Verdict) -> str:
    lines = [f"{document['command']} (p={document['prime']})"]
    lines.extend(_verdict_lines(verdict, 0))
    for key, value in document["payload"].items():
        if isinstance(value, list):
            lines.append(f"{key}:")
            lines.extend(f"   {item}" for item in value)
        else:
            lines.append(f"{key}: {value}")
    for decision in document["decisions"]:
        lines.append(f"ℹ️  {decision}")
    return "\n".join(lines)
