"""Verdict lines of the acceptance run, printed again in the pytest terminal summary."""
LINES: list[str] = []
