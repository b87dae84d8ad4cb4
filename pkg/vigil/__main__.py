import sys

from vigil.main import main

sys.exit(main())
