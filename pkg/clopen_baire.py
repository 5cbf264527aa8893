#!/usr/bin/env python3
"""
Clopen Baire - clopen graphs on Baire space

Convenience entry point; the code lives in the clopen_baire package.
"""

import sys

from clopen_baire.__main__ import main

if __name__ == "__main__":
    sys.exit(main())
