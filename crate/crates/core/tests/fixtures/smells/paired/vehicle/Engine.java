@Component("Engine")
public class Engine {
    @Port("p") public void start() { }

    @Port("p") public void stop() { }
}
