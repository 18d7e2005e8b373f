from eatrees.cli import main

raise SystemExit(main())
