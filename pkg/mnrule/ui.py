"""UI utility functions."""

from typing import Optional

from mnrule.rules import ShootoutResult, Transcript

SCORED = "✓"
MISSED = "x"
NOT_TAKEN = "-"


def generate_line(char, length=40):
    """Generate a line of characters for display formatting."""
    return char * length + "\n"


def kick_mark(scored: Optional[bool]) -> str:
    if scored is None:
        return NOT_TAKEN
    return SCORED if scored else MISSED


def result_label(transcript: Transcript) -> str:
    """Result column text, e.g. "A wins 5-3" or "Sudden Death 5-4, B wins"."""
    a, b = transcript.final_score
    if not transcript.went_to_sudden_death:
        return f"{transcript.result.value} {a}-{b}"
    label = f"Sudden Death {a}-{b}"
    if transcript.result is ShootoutResult.UNRESOLVED:
        return f"{label}, unresolved after {len(transcript.sd_rounds)} rounds"
    return f"{label}, {transcript.result.value}"


def render_transcript(transcript: Transcript) -> str:
    """Two-row kick table: one column per round, sudden-death rounds after a bar."""
    headers = [str(i) for i in range(1, len(transcript.rounds) + 1)]
    sd_headers = [f"SD{i}" for i in range(1, len(transcript.sd_rounds) + 1)]
    columns = list(transcript.rounds) + list(transcript.sd_rounds)
    widths = [max(len(h), 2) for h in headers + sd_headers]

    def row(cells):
        regulation = " ".join(cell.center(w) for cell, w in zip(cells[: len(headers)], widths))
        if not sd_headers:
            return regulation
        sudden_death = " ".join(cell.center(w) for cell, w in zip(cells[len(headers) :], widths[len(headers) :]))
        return f"{regulation} | {sudden_death}"

    header = f"{'Round':<6}{row(headers + sd_headers)}"
    a_row = f"{'A':<6}{row([kick_mark(a) for a, _ in columns])}   {result_label(transcript)}"
    b_row = f"{'B':<6}{row([kick_mark(b) for _, b in columns])}"
    return header + "\n" + generate_line("-", len(header)) + a_row + "\n" + b_row + "\n"
