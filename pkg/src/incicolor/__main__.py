from incicolor.cli import main

raise SystemExit(main())
