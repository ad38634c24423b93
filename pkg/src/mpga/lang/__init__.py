"""Scene-script language: ``parse`` text, ``evaluate`` it in a space, run it from the ``mpga`` CLI."""
from .evaluator import EvalError, Undefined, evaluate, render_value, run
from .syntax import ScriptError, parse

__all__ = ["EvalError", "ScriptError", "Undefined", "evaluate", "parse", "render_value", "run"]
