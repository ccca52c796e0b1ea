import sys

from relaycap.main import main

sys.exit(main())
