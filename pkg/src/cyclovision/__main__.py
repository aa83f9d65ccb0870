from cyclovision.cli import main

main()
