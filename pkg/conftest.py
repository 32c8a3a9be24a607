import os
import sys

# modules are imported as top-level namespace packages (core, toolbox) from the repository root
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
