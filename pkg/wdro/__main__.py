import sys

from wdro.main import main

sys.exit(main())
