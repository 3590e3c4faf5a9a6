# Copyright (C) 2026 The rbn-attractor-clusters authors
# Licensed under GPL v3 or later

from ._cli import main

if __name__ == "__main__":
    main()
