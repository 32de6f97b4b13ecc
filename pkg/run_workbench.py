"""ワークベンチ CLI 起動スクリプト

例:
  python run_workbench.py verify --suite rank1 --family so3 --lambda 2 --lambdastar 1
  python run_workbench.py induce --family B --n 2 --mplus 1 --mminus 0 --pi ps:4/5,1/5 --report verdict
"""

from src.main import main

if __name__ == '__main__':
    main()
