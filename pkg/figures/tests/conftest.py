import sys
from pathlib import Path

# Make figures/render.py importable as a plain module.
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))
