#!/usr/bin/env python3
"""Entry point for python -m cdiff_toolkit"""
import sys

from cdiff_toolkit.cli import main

sys.exit(main())
