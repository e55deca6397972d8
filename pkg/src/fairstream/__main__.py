import sys

from fairstream.cli import main

sys.exit(main())
