# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

APP = "rbn-attractor-clusters"
DESCRIPTION = "Command-line toolkit to sample and compare attractors of Random Boolean Networks"
VERSION = "1.0.0"
