import sys

from scrteleport.harness.cli import main

sys.exit(main())
