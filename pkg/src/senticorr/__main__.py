from senticorr.cli import main

raise SystemExit(main())
