@ThreadSafe class CounterDR {
  int cnt = 0;

  public void inc() {
    int temp = cnt;
    temp += 1;
    cnt = temp;
  }
}
