import sys
from pathlib import Path

# allow running pytest from a fresh checkout without installing the package
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
